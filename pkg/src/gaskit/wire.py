"""Binary message framing shared by the protocol demo and the simulator.

Frame layout (all integers big-endian)::

    msg := type:u8 | epoch:u32 | member_id_len:u8 | member_id | payload

Payloads::

    public share    := x_len:u16 | x | y_len:u16 | y        (type PUBLIC_SHARE)
    encrypted share := nonce(12) | ct_len:u16 | ciphertext+tag  (type ENCRYPTED_SHARE)
    harn release    := x_len:u16 | x | e_len:u16 | e        (type HARN_RELEASE)
    verdict         := accepted:u8                          (type VERDICT)
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

__all__ = [
    "PUBLIC_SHARE",
    "ENCRYPTED_SHARE",
    "HARN_RELEASE",
    "VERDICT",
    "NONCE_LEN",
    "Frame",
    "encode_frame",
    "decode_frame",
    "encode_point_payload",
    "decode_point_payload",
    "encode_encrypted_payload",
    "decode_encrypted_payload",
]

PUBLIC_SHARE = 1
ENCRYPTED_SHARE = 2
HARN_RELEASE = 3
VERDICT = 4

NONCE_LEN = 12

_MSG_TYPES = (PUBLIC_SHARE, ENCRYPTED_SHARE, HARN_RELEASE, VERDICT)


@dataclass(frozen=True)
class Frame:
    msg_type: int
    epoch: int
    member_id: str
    payload: bytes


def encode_frame(msg_type: int, epoch: int, member_id: str, payload: bytes) -> bytes:
    if msg_type not in _MSG_TYPES:
        raise ValueError(f"unknown message type {msg_type}")
    if not 0 <= epoch < 2**32:
        raise ValueError(f"epoch {epoch} out of u32 range")
    mid = member_id.encode("utf-8")
    if len(mid) > 255:
        raise ValueError("member id longer than 255 bytes")
    return struct.pack(">BIB", msg_type, epoch, len(mid)) + mid + payload


def decode_frame(buf: bytes) -> Frame:
    if len(buf) < 6:
        raise ValueError("truncated frame header")
    msg_type, epoch, mid_len = struct.unpack_from(">BIB", buf)
    if msg_type not in _MSG_TYPES:
        raise ValueError(f"unknown message type {msg_type}")
    if len(buf) < 6 + mid_len:
        raise ValueError("truncated member id")
    member_id = buf[6 : 6 + mid_len].decode("utf-8")
    return Frame(msg_type, epoch, member_id, bytes(buf[6 + mid_len :]))


def _encode_two_fields(a: bytes, b: bytes) -> bytes:
    if len(a) > 0xFFFF or len(b) > 0xFFFF:
        raise ValueError("field longer than u16 length prefix allows")
    return struct.pack(">H", len(a)) + a + struct.pack(">H", len(b)) + b


def _decode_two_fields(payload: bytes) -> tuple[bytes, bytes]:
    if len(payload) < 2:
        raise ValueError("truncated payload")
    (a_len,) = struct.unpack_from(">H", payload)
    off = 2 + a_len
    if len(payload) < off + 2:
        raise ValueError("truncated payload")
    (b_len,) = struct.unpack_from(">H", payload, off)
    end = off + 2 + b_len
    if len(payload) != end:
        raise ValueError("payload length mismatch")
    return bytes(payload[2 : 2 + a_len]), bytes(payload[off + 2 : end])


def encode_point_payload(x: bytes, y: bytes) -> bytes:
    """Used for both curve points (x, y) and Harn releases (x_i, e_i)."""
    return _encode_two_fields(x, y)


def decode_point_payload(payload: bytes) -> tuple[bytes, bytes]:
    return _decode_two_fields(payload)


def encode_encrypted_payload(nonce: bytes, ciphertext: bytes) -> bytes:
    if len(nonce) != NONCE_LEN:
        raise ValueError(f"nonce must be {NONCE_LEN} bytes")
    if len(ciphertext) > 0xFFFF:
        raise ValueError("ciphertext longer than u16 length prefix allows")
    return nonce + struct.pack(">H", len(ciphertext)) + ciphertext


def decode_encrypted_payload(payload: bytes) -> tuple[bytes, bytes]:
    if len(payload) < NONCE_LEN + 2:
        raise ValueError("truncated encrypted payload")
    nonce = bytes(payload[:NONCE_LEN])
    (ct_len,) = struct.unpack_from(">H", payload, NONCE_LEN)
    ct = bytes(payload[NONCE_LEN + 2 :])
    if len(ct) != ct_len:
        raise ValueError("ciphertext length mismatch")
    return nonce, ct
