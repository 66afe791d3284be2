"""The prompt constructions sent to the chat and image-generation providers.

These strings are part of the product's behavior contract; tests assert
them byte-for-byte, so do not reflow or "fix" their punctuation.
"""

CAPTION_RECOMMEND = (
    "Generate three promotional captions for each dimension (product, activity, "
    "advertisement) based on the given text: {topic}. please also highlight the "
    "keywords with asterisks and keep rendering icons in each caption."
)

CAPTION_EXPLORE_WITH_TEXT = (
    "Generate three promotional captions for each dimension (product, activity, "
    "advertisement) based on the given text: {seed_text} and following the given "
    "prompt {text_context}. please also highlight the keywords with asterisks and "
    "keep rendering icons in each caption."
)

CAPTION_EXPLORE_WITH_IMAGE = (
    "Generate three promotional captions for each dimension (product, activity, "
    "advertisement) based on the given text: {seed_text} and following the given "
    "image prompt {description}. please also highlight the keywords with asterisks "
    "and keep rendering icons in each caption."
)

CAPTION_FUSE_WITH_TEXT = (
    "Regenerate the following promotional post caption: {caption} based on the "
    "given text prompt: {prompt}. Please also highlight the related keywords with "
    "asterisks and keep rendering icons in the caption"
)

CAPTION_FUSE_WITH_IMAGE = (
    "Regenerate the following promotional caption {caption} based on the given "
    "image context: {description}. Please also highlight the related keywords "
    "with asterisks and keep rendering icons in the caption."
)


def contextual_image_prompt(description, text_context):
    """Joins an image description with a dragged text context."""
    return f"{description} under the context of {text_context}"


def image_fusion_with_text(description, requirement):
    return f"{description} based on the requirement: {requirement}"


def image_fusion_with_image(target_description, interest_description):
    return f"{target_description} under the context of: {interest_description}"
