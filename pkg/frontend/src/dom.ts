/** Interpret a virtual node tree into real DOM.
 *
 * The console re-renders wholesale on every state change; at queue
 * scale that is cheaper than being clever, and it keeps the views pure.
 */

import type { VNode } from "./view.js";

export function toDom(node: VNode | string, doc: Document): Node {
  if (typeof node === "string") return doc.createTextNode(node);
  const el = doc.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) {
    el.setAttribute(key, value);
  }
  // textarea value must be set as a property to survive re-renders
  if (node.tag === "textarea" && "value" in node.attrs) {
    (el as HTMLTextAreaElement).value = node.attrs["value"] ?? "";
  }
  for (const [event, handler] of Object.entries(node.on)) {
    el.addEventListener(event, handler);
  }
  for (const child of node.children) {
    el.appendChild(toDom(child, doc));
  }
  return el;
}

export function mount(root: Element, tree: VNode): void {
  const doc = root.ownerDocument;
  root.replaceChildren(toDom(tree, doc));
}
