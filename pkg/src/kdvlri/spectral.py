"""Fourier pseudo-spectral core for real periodic fields on the torus (0, 2*pi).

Conventions shared by every module in this package:

* N even grid nodes x_j = 2*pi*j/N, j = 0, ..., N-1.
* Spectral coefficients are normalized as uhat(xi) = (1/N) sum_j u(x_j)
  exp(-i xi x_j), so for a band-limited trigonometric polynomial the discrete
  coefficients equal the continuous Fourier coefficients and operator
  formulas transfer verbatim.  Arrays stay in numpy FFT order; the
  wavenumber set is {0, 1, ..., N/2 - 1} together with {-N/2, ..., -1}.
* The Nyquist mode -N/2 has no conjugate partner on the grid.  Odd-order
  multipliers (dx with odd order, inv_dx) zero it, and the phase symbols of
  exp_airy and translate drop their phase there (symbol 1).  This keeps real
  fields real, makes exp_airy an exact isometry of every H^gamma norm, and
  preserves the group law exp_airy(f, s + t) = exp_airy(exp_airy(f, s), t).
* inv_dx is the mean-free antiderivative: multiplier 1/(i xi) for xi != 0
  and 0 at xi = 0, so inv_dx(dx(f, 1)) == project_zero_mean(f).

All operations are pure: a Field is immutable after construction (its arrays
are marked read-only) and safe to share between threads.
"""

from __future__ import annotations

import struct

import numpy as np

TWO_PI = 2.0 * np.pi

_BINARY_MAGIC = b"KDVF"
# 16-byte header: magic, little-endian u32 N, 8 reserved zero bytes.
_BINARY_HEADER = struct.Struct("<4sII4x")


class Grid:
    """Uniform N-point grid on (0, 2*pi), N even and at least 4.

    Caches the integer wavenumbers (FFT order) and the multiplier arrays
    shared by the spectral operators.  Cached arrays are read-only, so a Grid
    can be used concurrently from several threads.
    """

    def __init__(self, n: int):
        n = int(n)
        if n < 4 or n % 2 != 0:
            raise ValueError(f"grid size must be even and >= 4, got {n}")
        self.n = n
        self.length = TWO_PI
        self.x = TWO_PI * np.arange(n) / n
        self.wavenumbers = np.fft.fftfreq(n, d=1.0 / n).astype(np.int64)
        self.nyquist_index = n // 2

        k = self.wavenumbers.astype(np.float64)
        ik = 1j * k
        ik[self.nyquist_index] = 0.0  # unpaired mode: odd multiplier vanishes
        inv_ik = np.zeros(n, dtype=np.complex128)
        nonzero = self.wavenumbers != 0
        nonzero[self.nyquist_index] = False
        inv_ik[nonzero] = 1.0 / ik[nonzero]
        k3 = k**3
        k3[self.nyquist_index] = 0.0  # phase symbols carry no Nyquist phase
        self._ik = ik
        self._inv_ik = inv_ik
        self._k3 = k3
        for arr in (self.x, self.wavenumbers, self._ik, self._inv_ik, self._k3):
            arr.flags.writeable = False

    def __eq__(self, other):
        return isinstance(other, Grid) and other.n == self.n

    def __hash__(self):
        return hash(("Grid", self.n))

    def __repr__(self):
        return f"Grid(n={self.n})"


class Field:
    """Real periodic field on a Grid.

    Holds grid values and/or normalized spectral coefficients; whichever
    representation is missing is computed on first access and cached.  Both
    arrays are read-only: a Field never mutates after construction.
    """

    __slots__ = ("grid", "_values", "_spectrum")

    def __init__(self, grid: Grid, values=None, spectrum=None):
        if values is None and spectrum is None:
            raise ValueError("Field needs values or spectrum")
        self.grid = grid
        self._values = None
        self._spectrum = None
        if values is not None:
            values = np.asarray(values, dtype=np.float64)
            if values.shape != (grid.n,):
                raise ValueError(
                    f"values shape {values.shape} does not match grid n={grid.n}"
                )
            values = values.copy()
            values.flags.writeable = False
            self._values = values
        if spectrum is not None:
            spectrum = np.asarray(spectrum, dtype=np.complex128)
            if spectrum.shape != (grid.n,):
                raise ValueError(
                    f"spectrum shape {spectrum.shape} does not match grid n={grid.n}"
                )
            spectrum = spectrum.copy()
            spectrum.flags.writeable = False
            self._spectrum = spectrum

    @classmethod
    def from_values(cls, grid: Grid, values) -> "Field":
        return cls(grid, values=values)

    @classmethod
    def from_spectrum(cls, grid: Grid, spectrum) -> "Field":
        return cls(grid, spectrum=spectrum)

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            v = np.fft.ifft(self._spectrum * self.grid.n).real
            v.flags.writeable = False
            self._values = v
        return self._values

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            s = np.fft.fft(self._values) / self.grid.n
            s.flags.writeable = False
            self._spectrum = s
        return self._spectrum

    def __repr__(self):
        return f"Field(n={self.grid.n})"


def to_spectrum(f: Field) -> np.ndarray:
    """Normalized coefficients uhat(xi) = (1/N) sum_j f(x_j) e^{-i xi x_j}.

    FFT ordering; ``f.grid.wavenumbers`` gives the matching integer xi.
    """
    return f.spectrum


def _apply_symbol(f: Field, symbol) -> Field:
    return Field.from_spectrum(f.grid, f.spectrum * symbol)


def dx(f: Field, order: int = 1) -> Field:
    """Spectral derivative d^order/dx^order; Nyquist zeroed for odd order."""
    if order < 0:
        raise ValueError(f"derivative order must be >= 0, got {order}")
    g = f.grid
    if order == 0:
        return f
    if order == 1:
        return _apply_symbol(f, g._ik)
    sym = (1j * g.wavenumbers.astype(np.float64)) ** order
    if order % 2:
        sym[g.nyquist_index] = 0.0
    return _apply_symbol(f, sym)


def inv_dx(f: Field) -> Field:
    """Mean-free antiderivative: uhat(xi)/(i xi) for xi != 0, else 0."""
    return _apply_symbol(f, f.grid._inv_ik)


def exp_airy(f: Field, t: float) -> Field:
    """Airy propagator e^{-t d^3/dx^3}: symbol e^{i t xi^3}.

    exp_airy(cos(x), t) = cos(x + t).  Exact inverse is exp_airy(., -t);
    the map is an isometry of every H^gamma norm and a group action in t.
    """
    return _apply_symbol(f, np.exp(1j * t * f.grid._k3))


def translate(f: Field, a: float) -> Field:
    """f(x + a) via the phase symbol e^{i xi a} (exact for band-limited f)."""
    k = f.grid.wavenumbers.astype(np.float64)
    phase = k * a
    sym = np.exp(1j * phase)
    sym[f.grid.nyquist_index] = 1.0  # no Nyquist phase, keeps values real
    return _apply_symbol(f, sym)


def project_zero_mean(f: Field) -> Field:
    """Remove the mean: mode-0 coefficient set to exactly 0."""
    s = f.spectrum.copy()
    s[0] = 0.0
    return Field.from_spectrum(f.grid, s)


def sobolev_norm(f: Field, gamma: float = 0.0) -> float:
    """H^gamma norm sqrt(2 pi) * (sum_xi (1 + xi^2)^gamma |uhat(xi)|^2)^(1/2).

    The sum runs over the full discrete band including the Nyquist mode;
    gamma = 0 gives the L^2 norm.
    """
    k = f.grid.wavenumbers.astype(np.float64)
    s = f.spectrum
    weighted = (1.0 + k * k) ** gamma * (s.real**2 + s.imag**2)
    return float(np.sqrt(TWO_PI * np.sum(weighted)))


def integral(f: Field) -> float:
    """Integral over the torus: 2 pi * uhat(0) = (2 pi / N) sum_j f(x_j).

    Trapezoid sums are exact spectral quadrature on the periodic grid.
    """
    if f._values is not None:
        return float(TWO_PI * np.mean(f._values))
    return float(TWO_PI * f.spectrum[0].real)


def mean_value(f: Field) -> float:
    """Mean (1/2pi) * integral(f), i.e. the mode-0 coefficient."""
    return integral(f) / TWO_PI


def truncate_two_thirds(f: Field) -> Field:
    """2/3-rule dealiasing: zero every mode with 3 |xi| >= N."""
    keep = 3 * np.abs(f.grid.wavenumbers) < f.grid.n
    return Field.from_spectrum(f.grid, np.where(keep, f.spectrum, 0.0))


def conjugate_symmetry_defect(f: Field) -> float:
    """Max |uhat(xi) - conj(uhat(-xi))|; 0 for a perfectly real field.

    The self-paired modes 0 and -N/2 contribute twice their imaginary part.
    """
    s = f.spectrum
    n = f.grid.n
    mirrored = s[(-np.arange(n)) % n]
    return float(np.max(np.abs(s - np.conj(mirrored))))


# ---------------------------------------------------------------------------
# serialization


def write_field_csv(f: Field, path) -> None:
    """CSV: header '# n=<N> length=<2 pi>' then one grid value per line."""
    lines = [f"# n={f.grid.n} length={TWO_PI!r}"]
    lines.extend(format(v, ".17g") for v in f.values)
    with open(path, "w") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def read_field_csv(path) -> Field:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# n="):
            raise ValueError(f"{path}: missing field header, got {header!r}")
        try:
            n_part, length_part = header[2:].split()
            n = int(n_part.split("=", 1)[1])
            length = float(length_part.split("=", 1)[1])
        except (ValueError, IndexError) as exc:
            raise ValueError(f"{path}: malformed header {header!r}") from exc
        if abs(length - TWO_PI) > 1e-12:
            raise ValueError(f"{path}: unsupported domain length {length}")
        values = np.loadtxt(fh, dtype=np.float64, ndmin=1)
    if values.shape != (n,):
        raise ValueError(
            f"{path}: header says n={n} but file has {values.shape[0]} values"
        )
    return Field.from_values(Grid(n), values)


def write_field_binary(f: Field, path) -> None:
    """16-byte header (magic 'KDVF', u32 N, reserved) + N little-endian f64.

    Round trip through read_field_binary is bit-exact.
    """
    with open(path, "wb") as fh:
        fh.write(_BINARY_HEADER.pack(_BINARY_MAGIC, f.grid.n, 0))
        fh.write(f.values.astype("<f8", copy=False).tobytes())


def read_field_binary(path) -> Field:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _BINARY_HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, n, _reserved = _BINARY_HEADER.unpack_from(raw)
    if magic != _BINARY_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    expected = _BINARY_HEADER.size + 8 * n
    if len(raw) != expected:
        raise ValueError(f"{path}: expected {expected} bytes, got {len(raw)}")
    values = np.frombuffer(raw, dtype="<f8", offset=_BINARY_HEADER.size)
    return Field.from_values(Grid(n), values.astype(np.float64))


def write_field(f: Field, path, fmt: str = "csv") -> None:
    if fmt == "csv":
        write_field_csv(f, path)
    elif fmt in ("bin", "binary"):
        write_field_binary(f, path)
    else:
        raise ValueError(f"unknown field format {fmt!r}")


def read_field(path, fmt: str = None) -> Field:
    """Read a field; format sniffed from the magic bytes when not given."""
    if fmt is None:
        with open(path, "rb") as fh:
            fmt = "binary" if fh.read(4) == _BINARY_MAGIC else "csv"
    if fmt == "csv":
        return read_field_csv(path)
    if fmt in ("bin", "binary"):
        return read_field_binary(path)
    raise ValueError(f"unknown field format {fmt!r}")
