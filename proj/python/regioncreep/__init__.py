"""Region creep binary image classifier.

Images are stored as overlapping windows per region; classification matches
windows, lets neighbouring regions vote on each window ("creep"), rebuilds
the image from the chosen windows and corrects it with whole-image rules.
"""

from ._core import (
    AreaPattern,
    BinaryImage,
    ClassificationResult,
    FormatError,
    GeometryError,
    GlobalRule,
    Model,
    RuleSet,
    agreement_score,
    apply_rules,
    build_rules,
    classify,
    corner_pixels,
    diff_images,
    emit_ascii_grid,
    emit_pbm,
    extract_area,
    load_dataset,
    load_model,
    parse_ascii_grid,
    parse_pbm,
    read_image,
    region_grid,
    save_model,
    serialize_model,
    train,
)

__all__ = [
    "AreaPattern",
    "BinaryImage",
    "ClassificationResult",
    "FormatError",
    "GeometryError",
    "GlobalRule",
    "Model",
    "RuleSet",
    "agreement_score",
    "apply_rules",
    "build_rules",
    "classify",
    "corner_pixels",
    "diff_images",
    "emit_ascii_grid",
    "emit_pbm",
    "extract_area",
    "load_dataset",
    "load_model",
    "parse_ascii_grid",
    "parse_pbm",
    "read_image",
    "region_grid",
    "save_model",
    "serialize_model",
    "train",
]
