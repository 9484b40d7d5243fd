"""Hash-keystream symmetric cipher with key tags.

enc XORs the message against SHA-256 counter blocks derived from the key and
prepends a short tag of the key so the right ciphertext can be picked out of
a batch without trial decryption.  The tag deliberately identifies the key:
in the sealing protocol each key is a one-time random string, so linking
ciphertext to key reveals nothing beyond what the protocol already shares.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from typing import Iterable

from .bits import BitString
from .errors import AmbiguousTagError, KeyMismatchError, TagNotFoundError

TAG_BYTES = 16

_TAG_PREFIX = b"tag/"
_STREAM_PREFIX = b"enc/"
_BLOCK_BYTES = hashlib.sha256().digest_size


@dataclass(frozen=True, slots=True)
class Ciphertext:
    key_tag: bytes
    body: bytes


def key_tag(key: BitString) -> bytes:
    return hashlib.sha256(_TAG_PREFIX + key.encode()).digest()[:TAG_BYTES]


def _keystream(key: BitString, length: int) -> bytes:
    material = _STREAM_PREFIX + key.encode()
    blocks = []
    for counter in range((length + _BLOCK_BYTES - 1) // _BLOCK_BYTES):
        blocks.append(
            hashlib.sha256(material + struct.pack(">Q", counter)).digest()
        )
    return b"".join(blocks)[:length]


def enc(key: BitString, message: bytes) -> Ciphertext:
    stream = _keystream(key, len(message))
    body = bytes(m ^ s for m, s in zip(message, stream))
    return Ciphertext(key_tag(key), body)


def dec(key: BitString, ciphertext: Ciphertext) -> bytes:
    if ciphertext.key_tag != key_tag(key):
        raise KeyMismatchError("ciphertext tag does not match this key")
    stream = _keystream(key, len(ciphertext.body))
    return bytes(c ^ s for c, s in zip(ciphertext.body, stream))


def find_and_dec(key: BitString, ciphertexts: Iterable[Ciphertext]) -> bytes:
    """Decrypt the single ciphertext in the batch tagged for this key."""
    tag = key_tag(key)
    matches = [ct for ct in ciphertexts if ct.key_tag == tag]
    if not matches:
        raise TagNotFoundError("no ciphertext carries this key's tag")
    if len(matches) > 1:
        raise AmbiguousTagError(
            f"{len(matches)} ciphertexts carry the same key tag"
        )
    return dec(key, matches[0])
