"""Exactly 2-to-1 trapdoor claw-free function family.

The construction is a salted hash of a canonical representative: an instance
hides a nonzero shift ``s``, and eval(x) hashes min(x, x xor s), so x and
x xor s collide and nothing else does (up to hash collisions, which 256-bit
images make negligible at the supported widths).

Canonicalization needs the shift, so honest evaluation is modeled as oracle
access: parties other than the key holder evaluate through a TcfOracle
handle rather than recomputing the function from public data.  A deployment
would substitute a function family whose forward direction is publicly
computable; the protocol layers above only ever call eval.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from random import Random

from .bits import BitString
from .errors import InvalidInputError

SALT_BYTES = 16
IMAGE_BITS = 256

_EVAL_PREFIX = b"tcf/eval"
_PK_PREFIX = b"tcf/pk"


@dataclass(frozen=True, slots=True)
class TcfParams:
    """Instance sizing.  image_bits defaults to the full hash width."""

    bit_len: int
    image_bits: int = IMAGE_BITS

    def __post_init__(self) -> None:
        if self.bit_len < 2:
            raise InvalidInputError(f"bit_len must be >= 2, got {self.bit_len}")
        if self.image_bits % 8 != 0 or not 0 < self.image_bits <= IMAGE_BITS:
            raise InvalidInputError(
                f"image_bits must be a multiple of 8 in (0, {IMAGE_BITS}], "
                f"got {self.image_bits}"
            )
        if self.image_bits < 2 * self.bit_len:
            # Collision headroom: images at least twice the input width.
            raise InvalidInputError(
                f"image_bits {self.image_bits} too small for bit_len "
                f"{self.bit_len}; need image_bits >= 2*bit_len"
            )


def _image(params: TcfParams, salt: bytes, shift: int, x: BitString) -> bytes:
    canonical = min(x.value, x.value ^ shift)
    material = BitString(params.bit_len, canonical).encode()
    digest = hashlib.sha256(_EVAL_PREFIX + salt + material).digest()
    return digest[: params.image_bits // 8]


def _public_key_bytes(params: TcfParams, salt: bytes) -> bytes:
    return _PK_PREFIX + struct.pack(">II", params.bit_len, params.image_bits) + salt


class TcfOracle:
    """Evaluation handle for one committed instance.

    Answers eval queries without exposing the shift; the underscored fields
    exist because the simulation process has to hold the whole instance.
    """

    __slots__ = ("params", "_salt", "_shift")

    def __init__(self, params: TcfParams, salt: bytes, shift: BitString) -> None:
        if shift.bit_len != params.bit_len:
            raise InvalidInputError("shift width must match params.bit_len")
        if shift.value == 0:
            raise InvalidInputError("shift must be nonzero")
        if len(salt) != SALT_BYTES:
            raise InvalidInputError(f"salt must be {SALT_BYTES} bytes")
        self.params = params
        self._salt = salt
        self._shift = shift

    @property
    def bit_len(self) -> int:
        return self.params.bit_len

    @property
    def public_key(self) -> bytes:
        return _public_key_bytes(self.params, self._salt)

    def eval(self, x: BitString) -> bytes:
        if x.bit_len != self.params.bit_len:
            raise InvalidInputError(
                f"input width {x.bit_len} does not match instance width "
                f"{self.params.bit_len}"
            )
        return _image(self.params, self._salt, self._shift.value, x)

    def export_parts(self) -> tuple[TcfParams, bytes, BitString]:
        """Serialization hook for the document layer; leaks the instance."""
        return self.params, self._salt, self._shift

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TcfOracle):
            return NotImplemented
        return (
            self.params == other.params
            and self._salt == other._salt
            and self._shift == other._shift
        )


@dataclass(frozen=True, slots=True)
class TcfKeyPair:
    params: TcfParams
    salt: bytes
    shift: BitString  # trapdoor: x and x xor shift share an image

    def __post_init__(self) -> None:
        if self.shift.bit_len != self.params.bit_len:
            raise InvalidInputError("shift width must match params.bit_len")
        if self.shift.value == 0:
            raise InvalidInputError("shift must be nonzero")
        if len(self.salt) != SALT_BYTES:
            raise InvalidInputError(f"salt must be {SALT_BYTES} bytes")

    @property
    def public_key(self) -> bytes:
        return _public_key_bytes(self.params, self.salt)

    def oracle(self) -> TcfOracle:
        return TcfOracle(self.params, self.salt, self.shift)

    def eval(self, x: BitString) -> bytes:
        if x.bit_len != self.params.bit_len:
            raise InvalidInputError(
                f"input width {x.bit_len} does not match instance width "
                f"{self.params.bit_len}"
            )
        return _image(self.params, self.salt, self.shift.value, x)


@dataclass(frozen=True, slots=True)
class Claw:
    """Colliding pair: eval(x1) == eval(x2) == image, x1 != x2."""

    x1: BitString
    x2: BitString
    image: bytes


def keygen(params: TcfParams, rng: Random) -> TcfKeyPair:
    salt = rng.getrandbits(8 * SALT_BYTES).to_bytes(SALT_BYTES, "big")
    shift_value = 0
    while shift_value == 0:
        shift_value = rng.getrandbits(params.bit_len)
    return TcfKeyPair(params, salt, BitString(params.bit_len, shift_value))


def sample_claw(keypair: TcfKeyPair, rng: Random) -> Claw:
    """Draw a uniformly random claw of the instance."""
    x1 = BitString.random(keypair.params.bit_len, rng)
    x2 = x1 ^ keypair.shift
    return Claw(x1, x2, keypair.eval(x1))


def verify_claw(oracle: TcfOracle | TcfKeyPair, claw: Claw) -> bool:
    """Check x1 != x2 and that both map to the recorded image."""
    if claw.x1 == claw.x2:
        return False
    return oracle.eval(claw.x1) == claw.image and oracle.eval(claw.x2) == claw.image
