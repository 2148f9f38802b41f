"""Token authentication over the file store: salted password hashes, 24h tokens."""

from __future__ import annotations

import hashlib
import secrets
from datetime import datetime, timedelta, timezone
from typing import Callable

from .errors import InvalidCredentials
from .storage import FileStorage

TOKEN_TTL_HOURS = 24
_PBKDF2_ITERATIONS = 50_000


def _hash_password(password: str, salt: bytes) -> str:
    return hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, _PBKDF2_ITERATIONS).hex()


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


class AuthService:
    def __init__(self, storage: FileStorage, clock: Callable[[], datetime] = _utc_now):
        self.storage = storage
        self.clock = clock

    def register(self, username: str, password: str) -> str:
        if not username or not password:
            raise ValueError("username and password must be non-empty")
        if self.storage.get("users", username) is not None:
            raise ValueError(f"user {username!r} already exists")
        salt = secrets.token_bytes(16)
        self.storage.put(
            "users",
            username,
            {
                "user_id": username,
                "salt": salt.hex(),
                "password_hash": _hash_password(password, salt),
                "created_at": self.clock().isoformat(),
            },
        )
        return username

    def login(self, username: str, password: str) -> dict:
        record = self.storage.get("users", username)
        if record is None:
            raise InvalidCredentials("unknown user or wrong password")
        expected = _hash_password(password, bytes.fromhex(record["salt"]))
        if not secrets.compare_digest(expected, record["password_hash"]):
            raise InvalidCredentials("unknown user or wrong password")
        token = secrets.token_hex(16)  # 128 random bits
        issued = self.clock()
        record = {
            "token": token,
            "user_id": username,
            "issued_at": issued.isoformat(),
            "expires_at": (issued + timedelta(hours=TOKEN_TTL_HOURS)).isoformat(),
        }
        self.storage.put("tokens", token, record)
        return record

    def authenticate(self, token: str | None) -> str:
        if not token:
            raise InvalidCredentials("missing token")
        record = self.storage.get("tokens", token)
        if record is None:
            raise InvalidCredentials("unknown token")
        if self.clock() >= datetime.fromisoformat(record["expires_at"]):
            raise InvalidCredentials("token expired")
        return record["user_id"]
