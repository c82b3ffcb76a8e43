"""Aggregation protocol: delegates, input sharing, validation, views and the privacy game."""

from .config import DEFAULT_EPSILON, DEFAULT_TIMEOUT, SEED_BYTES, ZERO_SEED, ProtocolConfig
from .delegates import HashStream, select_delegates
from .pipeline import (
    DelegateCommittee,
    FlowComputation,
    ProtocolReport,
    derive_seed,
    rebuild_topology,
    run_flow_computation,
    run_protocol,
    settle,
    user_inputs,
    validate_views,
)
from .privacy import PrivacyResult, corrupted_edges, privacy_experiment
from .sharing import (
    Share,
    ShareRNG,
    UserInput,
    decode_input,
    encode_input,
    reconstruct,
    share_input,
)
from .validation import (
    OK,
    AbortReason,
    InputValidation,
    PeerData,
    ValidationResult,
    local_validate,
    validate_inputs,
)
from .views import RestrictedTxn, UserView, build_views, incident_edges, involved_users

__all__ = [
    "DEFAULT_EPSILON",
    "DEFAULT_TIMEOUT",
    "SEED_BYTES",
    "ZERO_SEED",
    "ProtocolConfig",
    "HashStream",
    "select_delegates",
    "DelegateCommittee",
    "FlowComputation",
    "ProtocolReport",
    "derive_seed",
    "rebuild_topology",
    "run_flow_computation",
    "run_protocol",
    "settle",
    "user_inputs",
    "validate_views",
    "PrivacyResult",
    "corrupted_edges",
    "privacy_experiment",
    "Share",
    "ShareRNG",
    "UserInput",
    "decode_input",
    "encode_input",
    "reconstruct",
    "share_input",
    "OK",
    "AbortReason",
    "InputValidation",
    "PeerData",
    "ValidationResult",
    "local_validate",
    "validate_inputs",
    "RestrictedTxn",
    "UserView",
    "build_views",
    "incident_edges",
    "involved_users",
]
