"""Beamspace primitives: tagged complex vectors, the unitary DFT pair and
magnitude sorting.

Every vector handled by the package is a :class:`ComplexVec`, which carries a
:class:`Domain` tag. ``dft`` maps antenna-domain vectors to beamspace and
``idft`` maps them back. Both are unitary (``1/sqrt(B)`` on each direction),
so energies and white-noise variances are identical in both domains.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Union

import numpy as np

__all__ = [
    "ConfigurationError",
    "DomainError",
    "Domain",
    "ComplexVec",
    "SortedMagnitudes",
    "antenna",
    "beamspace",
    "is_power_of_two",
    "dft_matrix",
    "dft",
    "idft",
    "sort_magnitudes",
    "write_vector_csv",
    "read_vector_csv",
]


class ConfigurationError(ValueError):
    """Invalid sizes, parameters or configuration values."""


class DomainError(TypeError):
    """Antenna-domain and beamspace-domain data were mixed."""


class Domain(enum.Enum):
    ANTENNA = "antenna"
    BEAMSPACE = "beamspace"

    @property
    def other(self) -> "Domain":
        return Domain.BEAMSPACE if self is Domain.ANTENNA else Domain.ANTENNA


@dataclass(frozen=True, eq=False)
class ComplexVec:
    """A length-B complex vector tagged with the domain it lives in.

    The underlying array is copied to ``complex128`` and made read-only.
    Arithmetic between two vectors requires matching domains and lengths;
    scaling by a scalar keeps the tag.
    """

    data: np.ndarray
    domain: Domain

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.complex128, copy=True)
        if arr.ndim != 1:
            raise ConfigurationError(f"expected a 1-D vector, got shape {arr.shape}")
        if arr.size < 1:
            raise ConfigurationError("vector length must be at least 1")
        if not isinstance(self.domain, Domain):
            raise TypeError(f"domain must be a Domain, got {self.domain!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    def __len__(self) -> int:
        return self.data.size

    @property
    def B(self) -> int:
        return self.data.size

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.data if not copy else self.data.copy()
        return self.data.astype(dtype)

    def __iter__(self):
        return iter(self.data)

    def __getitem__(self, idx):
        return self.data[idx]

    def _check_compatible(self, other: "ComplexVec"):
        if other.domain is not self.domain:
            raise DomainError(
                f"cannot combine {self.domain.value} and {other.domain.value} vectors"
            )
        if other.B != self.B:
            raise ConfigurationError(f"length mismatch: {self.B} vs {other.B}")

    def __add__(self, other):
        if not isinstance(other, ComplexVec):
            return NotImplemented
        self._check_compatible(other)
        return ComplexVec(self.data + other.data, self.domain)

    def __sub__(self, other):
        if not isinstance(other, ComplexVec):
            return NotImplemented
        self._check_compatible(other)
        return ComplexVec(self.data - other.data, self.domain)

    def __mul__(self, scalar):
        if isinstance(scalar, ComplexVec) or np.ndim(scalar) != 0:
            return NotImplemented
        return ComplexVec(self.data * scalar, self.domain)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, ComplexVec) or np.ndim(scalar) != 0:
            return NotImplemented
        return ComplexVec(self.data / scalar, self.domain)

    def __neg__(self):
        return ComplexVec(-self.data, self.domain)

    def energy(self) -> float:
        """Squared Euclidean norm."""
        return float(np.vdot(self.data, self.data).real)

    def allclose(self, other: "ComplexVec", rtol=1e-12, atol=1e-12) -> bool:
        self._check_compatible(other)
        return bool(np.allclose(self.data, other.data, rtol=rtol, atol=atol))


def antenna(x) -> ComplexVec:
    return x if isinstance(x, ComplexVec) and x.domain is Domain.ANTENNA else ComplexVec(np.asarray(x), Domain.ANTENNA)


def beamspace(x) -> ComplexVec:
    return x if isinstance(x, ComplexVec) and x.domain is Domain.BEAMSPACE else ComplexVec(np.asarray(x), Domain.BEAMSPACE)


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def dft_matrix(B: int) -> np.ndarray:
    """Dense unitary DFT matrix ``F[k, n] = exp(-2j*pi*k*n/B) / sqrt(B)``."""
    if B < 1:
        raise ConfigurationError(f"transform length must be >= 1, got {B}")
    idx = np.arange(B)
    # reduce k*n mod B before scaling so the phase stays exact for large B
    return np.exp(-2j * np.pi * (np.outer(idx, idx) % B) / B) / np.sqrt(B)


def _fft(x: np.ndarray) -> np.ndarray:
    if is_power_of_two(x.size):
        return np.fft.fft(x, norm="ortho")
    return dft_matrix(x.size) @ x


def _ifft(x: np.ndarray) -> np.ndarray:
    if is_power_of_two(x.size):
        return np.fft.ifft(x, norm="ortho")
    return dft_matrix(x.size).conj().T @ x


def _expect(v, domain: Domain) -> ComplexVec:
    if isinstance(v, ComplexVec):
        if v.domain is not domain:
            raise DomainError(f"expected a {domain.value} vector, got {v.domain.value}")
        return v
    return ComplexVec(np.asarray(v), domain)


def dft(v) -> ComplexVec:
    """Antenna domain -> beamspace with the unitary DFT.

    Power-of-two lengths go through the FFT; other lengths use the dense
    matrix product.
    """
    v = _expect(v, Domain.ANTENNA)
    return ComplexVec(_fft(v.data), Domain.BEAMSPACE)


def idft(v) -> ComplexVec:
    """Beamspace -> antenna domain; exact inverse of :func:`dft`."""
    v = _expect(v, Domain.BEAMSPACE)
    return ComplexVec(_ifft(v.data), Domain.ANTENNA)


@dataclass(frozen=True, eq=False)
class SortedMagnitudes:
    """Ascending magnitudes padded with two ``+inf`` sentinels.

    ``values[i] == abs(v)[permutation[i]]`` for ``i < B``; ``values[B]`` and
    ``values[B + 1]`` are ``inf``.
    """

    values: np.ndarray
    permutation: np.ndarray

    @property
    def B(self) -> int:
        return self.permutation.size

    @property
    def finite(self) -> np.ndarray:
        return self.values[: self.B]


def sort_magnitudes(v) -> SortedMagnitudes:
    """Sort ``|v|`` ascending; ties keep their original index order."""
    data = v.data if isinstance(v, ComplexVec) else np.asarray(v, dtype=np.complex128)
    mag = np.abs(data)
    perm = np.argsort(mag, kind="stable")
    values = np.concatenate([mag[perm], [np.inf, np.inf]])
    values.setflags(write=False)
    perm.setflags(write=False)
    return SortedMagnitudes(values=values, permutation=perm)


PathOrFile = Union[str, Path, IO[str]]


def write_vector_csv(dest: PathOrFile, v) -> None:
    """Write one ``re,im`` line per entry using shortest round-trip floats."""
    data = v.data if isinstance(v, ComplexVec) else np.asarray(v, dtype=np.complex128)
    text = "".join(f"{float(z.real)!r},{float(z.imag)!r}\n" for z in data)
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)


def read_vector_csv(src: PathOrFile, domain: Domain = Domain.ANTENNA) -> ComplexVec:
    if isinstance(src, (str, Path)):
        text = Path(src).read_text()
    else:
        text = src.read()
    values = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ConfigurationError(f"line {lineno}: expected 're,im', got {line!r}")
        try:
            values.append(complex(float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ConfigurationError(f"line {lineno}: {exc}") from None
    if not values:
        raise ConfigurationError("vector file contains no entries")
    return ComplexVec(np.array(values), domain)
