/** Suffix-stripping stemmer for English, matching the service's tokenizer.
 *
 * Prediction payloads carry tokens in stemmed form, so highlighting them
 * in raw message text requires the same stemmer on this side. This is
 * the classic 1980 Porter rule set, pinned to the same revision the
 * service uses: no later amendments, step 2 maps abli -> able. Within a
 * step the longest matching suffix is chosen first and only then is its
 * condition tested. Words of length one or two pass through unchanged.
 *
 * The service stems to a fixed point, so use stableStem() for matching.
 */

const VOWELS = new Set(["a", "e", "i", "o", "u"]);

function isConsonant(word: string, i: number): boolean {
  const ch = word[i]!;
  if (VOWELS.has(ch)) return false;
  if (ch === "y") return i === 0 || !isConsonant(word, i - 1);
  return true;
}

/** Count vowel-consonant sequences: the m in [C](VC)^m[V]. */
function measure(stem: string): number {
  let m = 0;
  let prevVowel = false;
  for (let i = 0; i < stem.length; i++) {
    const cons = isConsonant(stem, i);
    if (prevVowel && cons) m += 1;
    prevVowel = !cons;
  }
  return m;
}

function containsVowel(stem: string): boolean {
  for (let i = 0; i < stem.length; i++) {
    if (!isConsonant(stem, i)) return true;
  }
  return false;
}

function endsDoubleConsonant(word: string): boolean {
  return (
    word.length >= 2 &&
    word[word.length - 1] === word[word.length - 2] &&
    isConsonant(word, word.length - 1)
  );
}

// consonant-vowel-consonant where the final consonant is not w, x or y
function endsCvc(word: string): boolean {
  if (word.length < 3) return false;
  return (
    isConsonant(word, word.length - 3) &&
    !isConsonant(word, word.length - 2) &&
    isConsonant(word, word.length - 1) &&
    !"wxy".includes(word[word.length - 1]!)
  );
}

type Rule = readonly [suffix: string, replacement: string, minMeasure: number];

/** Apply the longest-suffix rule whose condition holds; once a suffix
 * matches, that rule is the only candidate. */
function ruleTable(word: string, rules: readonly Rule[]): string {
  for (const [suffix, replacement, minM] of rules) {
    if (word.endsWith(suffix)) {
      const stem = word.slice(0, word.length - suffix.length);
      if (measure(stem) > minM) return stem + replacement;
      return word;
    }
  }
  return word;
}

function step1a(word: string): string {
  if (word.endsWith("sses")) return word.slice(0, -2);
  if (word.endsWith("ies")) return word.slice(0, -2);
  if (word.endsWith("ss")) return word;
  if (word.endsWith("s")) return word.slice(0, -1);
  return word;
}

function step1b(word: string): string {
  if (word.endsWith("eed")) {
    if (measure(word.slice(0, -3)) > 0) return word.slice(0, -1);
    return word;
  }
  if (word.endsWith("ed")) {
    const stem = word.slice(0, -2);
    if (containsVowel(stem)) return step1bCleanup(stem);
    return word;
  }
  if (word.endsWith("ing")) {
    const stem = word.slice(0, -3);
    if (containsVowel(stem)) return step1bCleanup(stem);
    return word;
  }
  return word;
}

function step1bCleanup(stem: string): string {
  if (stem.endsWith("at") || stem.endsWith("bl") || stem.endsWith("iz")) {
    return stem + "e";
  }
  if (endsDoubleConsonant(stem) && !"lsz".includes(stem[stem.length - 1]!)) {
    return stem.slice(0, -1);
  }
  if (measure(stem) === 1 && endsCvc(stem)) return stem + "e";
  return stem;
}

function step1c(word: string): string {
  if (word.endsWith("y") && containsVowel(word.slice(0, -1))) {
    return word.slice(0, -1) + "i";
  }
  return word;
}

const STEP2: readonly Rule[] = [
  ["ational", "ate", 0],
  ["ization", "ize", 0],
  ["iveness", "ive", 0],
  ["fulness", "ful", 0],
  ["ousness", "ous", 0],
  ["tional", "tion", 0],
  ["biliti", "ble", 0],
  ["entli", "ent", 0],
  ["ousli", "ous", 0],
  ["aliti", "al", 0],
  ["iviti", "ive", 0],
  ["ation", "ate", 0],
  ["alism", "al", 0],
  ["enci", "ence", 0],
  ["anci", "ance", 0],
  ["izer", "ize", 0],
  ["abli", "able", 0],
  ["alli", "al", 0],
  ["ator", "ate", 0],
  ["eli", "e", 0],
];

const STEP3: readonly Rule[] = [
  ["icate", "ic", 0],
  ["ative", "", 0],
  ["alize", "al", 0],
  ["iciti", "ic", 0],
  ["ical", "ic", 0],
  ["ful", "", 0],
  ["ness", "", 0],
];

const STEP4: readonly Rule[] = [
  ["ement", "", 1],
  ["ance", "", 1],
  ["ence", "", 1],
  ["able", "", 1],
  ["ible", "", 1],
  ["ment", "", 1],
  ["ant", "", 1],
  ["ent", "", 1],
  ["ism", "", 1],
  ["ate", "", 1],
  ["iti", "", 1],
  ["ous", "", 1],
  ["ive", "", 1],
  ["ize", "", 1],
  ["ion", "", 1], // handled separately, kept here for suffix ordering
  ["al", "", 1],
  ["er", "", 1],
  ["ic", "", 1],
  ["ou", "", 1],
];

function step4(word: string): string {
  for (const [suffix, , minM] of STEP4) {
    if (word.endsWith(suffix)) {
      const stem = word.slice(0, word.length - suffix.length);
      if (suffix === "ion" && !(stem.endsWith("s") || stem.endsWith("t"))) {
        return word;
      }
      if (measure(stem) > minM) return stem;
      return word;
    }
  }
  return word;
}

function step5a(word: string): string {
  if (word.endsWith("e")) {
    const stem = word.slice(0, -1);
    const m = measure(stem);
    if (m > 1 || (m === 1 && !endsCvc(stem))) return stem;
  }
  return word;
}

function step5b(word: string): string {
  if (measure(word) > 1 && endsDoubleConsonant(word) && word.endsWith("l")) {
    return word.slice(0, -1);
  }
  return word;
}

const cache = new Map<string, string>();

/** Strip English suffixes from a lowercase word. */
export function stem(word: string): string {
  if (word.length <= 2) return word;
  const hit = cache.get(word);
  if (hit !== undefined) return hit;
  let out = step1a(word);
  out = step1b(out);
  out = step1c(out);
  out = ruleTable(out, STEP2);
  out = ruleTable(out, STEP3);
  out = step4(out);
  out = step5a(out);
  out = step5b(out);
  if (cache.size > 65536) cache.clear();
  cache.set(word, out);
  return out;
}

/** Stem to a fixed point, the form tokens take in prediction payloads. */
export function stableStem(word: string): string {
  for (let i = 0; i < 5; i++) {
    const next = stem(word);
    if (next === word) return word;
    word = next;
  }
  return word;
}
