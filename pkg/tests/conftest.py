from __future__ import annotations

import time
from contextlib import contextmanager

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def fock_displacement(alpha: complex, dim: int) -> np.ndarray:
    """exp(alpha a^dag - conj(alpha) a) in a truncated Fock basis."""
    a = np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)
    gen = alpha * a.conj().T - np.conj(alpha) * a
    # gen is anti-Hermitian: gen = -i H with H Hermitian
    w, v = np.linalg.eigh(1j * gen)
    return (v * np.exp(-1j * w)) @ v.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


ACCEPTANCE: dict[int, str] = {}


class Record:
    def __init__(self):
        self.notes: list[str] = []
        self.unmet: list[str] = []

    def note(self, text: str) -> None:
        self.notes.append(text)

    def fail(self, text: str) -> None:
        """Mark the criterion unmet without stopping the test."""
        self.unmet.append(text)


@contextmanager
def criterion(number: int, title: str):
    """Record one PASS/FAIL line for an acceptance criterion."""
    rec = Record()
    t0 = time.perf_counter()
    ok = False
    try:
        yield rec
        ok = not rec.unmet
    finally:
        dt = time.perf_counter() - t0
        extra = "; ".join(rec.unmet + rec.notes)
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {title} [{dt:.3f} s]"
        ACCEPTANCE[number] = line + (f" ({extra})" if extra else "")
        print(ACCEPTANCE[number])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
