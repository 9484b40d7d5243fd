"""Quantum seal protocol simulator.

Seal a secret into a sparse superposition register, let the holder open it
with one measurement, and quantify how reliably tampering is caught when
the register (or a measurement of it) comes back for verification.
"""

from .bits import BitString
from .errors import (
    AmbiguousTagError,
    CapacityError,
    DocumentError,
    InvalidInputError,
    KeyMismatchError,
    ProtocolCorruptionError,
    QsealError,
    TagNotFoundError,
    UnsupportedModeError,
)
from .experiment import (
    CurvePoint,
    EstimateReport,
    TrialConfig,
    curve_csv,
    fig1_curve,
    mixture_diagnostic,
    run_trials,
    theory_pcheck,
    wilson_interval,
)
from .seal import (
    AliceSecret,
    BinaryTcf,
    CheatStrategy,
    ClassicalReturn,
    NarySymmetric,
    QuantumReturn,
    ReturnKind,
    ReturnMessage,
    SealMode,
    SealPackage,
    VerifyMethod,
    alice_seal_binary,
    alice_seal_nary,
    alice_verify_classical,
    alice_verify_quantum,
    bob_open,
    bob_respond,
)
from .sparsestate import (
    SparseState,
    hadamard_measure,
    helstrom_discriminate,
    helstrom_success_probability,
    inner_product,
    measure_computational,
    singleton,
    trace_distance_pure,
    uniform_superposition,
)
from .symcrypto import Ciphertext, dec, enc, find_and_dec, key_tag
from .tcf import Claw, TcfKeyPair, TcfOracle, TcfParams, keygen, sample_claw, verify_claw

__version__ = "0.1.0"

__all__ = [
    "AliceSecret",
    "AmbiguousTagError",
    "BinaryTcf",
    "BitString",
    "CapacityError",
    "CheatStrategy",
    "Ciphertext",
    "ClassicalReturn",
    "Claw",
    "CurvePoint",
    "DocumentError",
    "EstimateReport",
    "InvalidInputError",
    "KeyMismatchError",
    "NarySymmetric",
    "ProtocolCorruptionError",
    "QsealError",
    "QuantumReturn",
    "ReturnKind",
    "ReturnMessage",
    "SealMode",
    "SealPackage",
    "SparseState",
    "TagNotFoundError",
    "TcfKeyPair",
    "TcfOracle",
    "TcfParams",
    "TrialConfig",
    "UnsupportedModeError",
    "VerifyMethod",
    "alice_seal_binary",
    "alice_seal_nary",
    "alice_verify_classical",
    "alice_verify_quantum",
    "bob_open",
    "bob_respond",
    "curve_csv",
    "dec",
    "enc",
    "fig1_curve",
    "find_and_dec",
    "hadamard_measure",
    "helstrom_discriminate",
    "helstrom_success_probability",
    "inner_product",
    "key_tag",
    "keygen",
    "measure_computational",
    "mixture_diagnostic",
    "run_trials",
    "sample_claw",
    "singleton",
    "theory_pcheck",
    "trace_distance_pure",
    "uniform_superposition",
    "verify_claw",
    "wilson_interval",
]
