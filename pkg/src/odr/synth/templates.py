"""Text banks for the corpus generator.

Rule-carrying phrases are the only sentences allowed to contain their
trigger token sequences; the filler banks are kept disjoint from every
trigger so a planted rule fires exactly when its phrase was rendered.
test_synth guards that disjointness against the actual normalizer.
"""

BUYER_FILLER = (
    "hi i am writing about order {n}",
    "any update on this order",
    "i have been waiting since last week",
    "this has taken longer than expected",
    "can you look into my order",
    "i checked with my local post office today",
    "my order number is {n}",
    "i still have not heard back from you",
    "this was meant to be a gift",
    "i would appreciate a quick resolution",
    "i paid on the same day the purchase went through",
    "the estimate said three to five business days",
)

SELLER_FILLER = (
    "we are looking into your order",
    "our support team has reviewed the account",
    "the warehouse confirmed the order went out",
    "we are sorry for the wait",
    "thanks for reaching out to us",
    "we take these reports very seriously",
    "our records show order {n} left on schedule",
    "carrier pickups were slow around the holiday",
    "we have asked the carrier for an update",
    "your patience is appreciated while we investigate",
)

PRE_PURCHASE_FILLER = (
    "hello does this come in other colors",
    "is this the latest model",
    "how soon can this go out after payment",
    "do you combine postage on two orders",
    "thanks for the quick answer",
)

PRE_DISPUTE_FILLER = (
    "just paid for order {n}",
    "got the payment thanks",
    "when will this go out",
    "it went out this morning",
    "ok thank you for the heads up",
)

# rule carriers: every variant must contain the rule's trigger sequence
TRACKING_DELIVERED = (
    "the tracking shows the package was delivered on {date}",
    "our carrier tracking shows the package was delivered to you",
)
EMPTY_BOX = (
    "i received an empty box",
    "there was just an empty box inside the mailer",
    "you sent me an empty box and i want my money back",
)
INCOMPLETE_ADDRESS = (
    "the carrier told us the shipping address was incomplete",
    "your shipping address was incomplete so the parcel came back to us",
)
NOT_AS_DESCRIBED = (
    "the item is not as described",
    "this item was not as described at all and i am upset",
    "this is not the item you described in your photos",
)
MATCHES_LISTING = (
    "the item matches the listing photos exactly",
    "what you got is exactly what the item matches in the listing photos",
)
REPLACEMENT_SENT = (
    "a replacement has already been shipped to you",
    "we sent a replacement at no extra cost",
)

GRATITUDE = "thank you so much for your patience"
PLEASE_START = "please let me know what happens next"
APOLOGY = "i am sorry about the trouble"

SUMMARY_SELLER_WINS = (
    "reviewed the case and found for the seller",
    "the seller provided consistent records so the claim was denied",
    "seller evidence outweighed the buyer account and the seller prevailed",
)
SUMMARY_BUYER_WINS = (
    "reviewed the case and found for the buyer",
    "the buyer account held up under review so the refund was granted",
    "buyer evidence outweighed the seller records and the buyer prevailed",
)
SUMMARY_APPEAL = (
    "the ruling was appealed and the file was reexamined in full",
    "an appeal was filed so a second arbitrator reread the thread",
)
SUMMARY_HARD = (
    "both accounts were partially supported which made the ruling unusually close",
    "the record contained conflicting statements that took extra review cycles",
    "several details could not be reconciled against the carrier records",
    "the final call went against the weight of the profile history",
)
