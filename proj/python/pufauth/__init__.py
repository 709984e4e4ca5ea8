"""Threshold-based SRAM-PUF authentication: simulation, coding, calibration."""

from ._core import (
    BitVector,
    CalibrateOutput,
    CalibrationResult,
    ConfigTag,
    DecodeReport,
    ExperimentPlan,
    GenuineSample,
    HammingVariant,
    HelperData,
    ImpostorModel,
    MajorityAccumulator,
    NoiseProfile,
    PufDevice,
    Rng,
    TauMax,
    all_variants,
    calibrate,
    calibrate_from_csv,
    decode,
    derive_seed,
    enroll_helper,
    far,
    generate_device,
    hamming_distance,
    hash_string,
    normalized_hd,
    parse_variant,
    partition_response,
    run_sweep,
    sample_response,
    stabilized_read,
    tau_max,
    tau_min,
    tau_to_bits,
    uniformity,
)

__all__ = [
    "BitVector",
    "CalibrateOutput",
    "CalibrationResult",
    "ConfigTag",
    "DecodeReport",
    "ExperimentPlan",
    "GenuineSample",
    "HammingVariant",
    "HelperData",
    "ImpostorModel",
    "MajorityAccumulator",
    "NoiseProfile",
    "PufDevice",
    "Rng",
    "TauMax",
    "all_variants",
    "calibrate",
    "calibrate_from_csv",
    "decode",
    "derive_seed",
    "enroll_helper",
    "far",
    "generate_device",
    "hamming_distance",
    "hash_string",
    "normalized_hd",
    "parse_variant",
    "partition_response",
    "run_sweep",
    "sample_response",
    "stabilized_read",
    "tau_max",
    "tau_min",
    "tau_to_bits",
    "uniformity",
]

__version__ = "0.1.0"
