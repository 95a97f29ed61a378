"""Structure-constant Lie algebras and the catalog of every algebra used
by the control and quantum families in this package.

A LieAlgebra is its dimension plus the rank-3 tensor c[a, b, g] with
[e_a, e_b] = sum_g c[a, b, g] e_g.  All catalog entries carry small
integer or half-integer constants, so antisymmetry and Jacobi hold
exactly in double precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import DimensionError, LieSysError, UnknownNameError

_JACOBI_TOL = 1e-12
_SPAN_SVD_RATIO = 1e-10


@dataclass(frozen=True)
class LieAlgebra:
    """dim, structure tensor and basis labels; immutable after construction."""

    dim: int
    structure: np.ndarray
    basis_labels: tuple = ()
    name: str = ""
    nilpotency_index: int | None = field(default=None, compare=False)

    def __post_init__(self):
        c = np.asarray(self.structure, dtype=float)
        if c.shape != (self.dim, self.dim, self.dim):
            raise DimensionError("structure tensor must be (r, r, r)")
        if np.max(np.abs(c + np.swapaxes(c, 0, 1))) != 0.0:
            raise LieSysError("structure constants must be exactly antisymmetric")
        object.__setattr__(self, "structure", c)
        if not self.basis_labels:
            object.__setattr__(
                self, "basis_labels", tuple(f"a{i+1}" for i in range(self.dim))
            )
        res = jacobi_residual(self)
        if res > _JACOBI_TOL:
            raise LieSysError(f"Jacobi identity violated (residual {res:.3g})")
        object.__setattr__(self, "nilpotency_index", _nilpotency_index(self))

    def basis_vector(self, i: int) -> "AlgebraVector":
        v = np.zeros(self.dim)
        v[i] = 1.0
        return AlgebraVector(self, v)

    def vector(self, coeffs) -> "AlgebraVector":
        return AlgebraVector(self, np.asarray(coeffs, dtype=float))


@dataclass(frozen=True)
class AlgebraVector:
    """Element of a LieAlgebra in the ambient basis."""

    algebra: LieAlgebra
    coeffs: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.coeffs, dtype=float)
        if v.shape != (self.algebra.dim,):
            raise DimensionError("vector length must equal algebra dimension")
        object.__setattr__(self, "coeffs", v)

    def __add__(self, other):
        self._check(other)
        return AlgebraVector(self.algebra, self.coeffs + other.coeffs)

    def __rmul__(self, s):
        return AlgebraVector(self.algebra, float(s) * self.coeffs)

    def _check(self, other):
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise DimensionError("vectors reference different algebras")


def bracket(x: AlgebraVector, y: AlgebraVector) -> AlgebraVector:
    """[x, y] from the structure tensor."""
    x._check(y)
    out = np.einsum("a,b,abg->g", x.coeffs, y.coeffs, x.algebra.structure)
    return AlgebraVector(x.algebra, out)


def bracket_coords(alg: LieAlgebra, x, y) -> np.ndarray:
    return np.einsum("a,b,abg->g", np.asarray(x, float), np.asarray(y, float), alg.structure)


def jacobi_residual(alg: LieAlgebra) -> float:
    """max over basis triples of ||[x,[y,z]] + [y,[z,x]] + [z,[x,y]]||_inf."""
    c = alg.structure
    # [e_a, [e_b, e_c]] = c[b,c,m] c[a,m,g]
    t = np.einsum("bcm,amg->abcg", c, c)
    total = t + np.einsum("abcg->bcag", t) + np.einsum("abcg->cabg", t)
    return float(np.max(np.abs(total)))


def ad_matrix(alg: LieAlgebra, a) -> np.ndarray:
    """Matrix of ad(a): (ad a)_{g,b} = sum_a' a_{a'} c[a', b, g]; ad(x) y = [x, y]."""
    coeffs = a.coeffs if isinstance(a, AlgebraVector) else np.asarray(a, dtype=float)
    return np.einsum("a,abg->gb", coeffs, alg.structure)


def _nilpotency_index(alg: LieAlgebra) -> int | None:
    # Smallest k with (ad x)^k = 0 for generic x, capped at r+1; the probe
    # uses a fixed generic coefficient vector so the result is reproducible.
    r = alg.dim
    probe = np.cos(np.arange(1, r + 1) * 1.7) + 0.5
    M = ad_matrix(alg, probe)
    P = np.eye(r)
    for k in range(1, r + 2):
        P = P @ M
        if np.max(np.abs(P)) < 1e-13:
            # verify on all basis directions (generic probe could be lucky)
            for i in range(r):
                Q = np.linalg.matrix_power(ad_matrix(alg, alg.basis_vector(i)), k)
                if np.max(np.abs(Q)) > 1e-13:
                    return None
            return k
    return None


def _expm_taylor(M: np.ndarray) -> np.ndarray:
    """Scaling-and-squaring with a 13-term Taylor series at the scaled argument."""
    norm = np.max(np.abs(M))
    squarings = 0
    if norm > 0.5:
        squarings = int(np.ceil(np.log2(norm / 0.5)))
        M = M / (2.0**squarings)
    out = np.eye(M.shape[0])
    term = np.eye(M.shape[0])
    for k in range(1, 14):
        term = term @ M / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


_AD_STACK_TERMS = 14
_ad_power_cache: dict = {}


def _ad_power_stack(alg: LieAlgebra, index: int):
    """Powers (ad a_index)^k / k! for k = 0..K, cached per algebra basis."""
    key = (id(alg), index)
    hit = _ad_power_cache.get(key)
    if hit is not None:
        return hit
    M = ad_matrix(alg, alg.basis_vector(index))
    kmax = alg.nilpotency_index or _AD_STACK_TERMS
    stack = [np.eye(alg.dim)]
    term = np.eye(alg.dim)
    for j in range(1, kmax):
        term = term @ M / j
        if alg.nilpotency_index is None and np.max(np.abs(term)) == 0.0:
            break
        stack.append(term)
    norm = float(np.max(np.abs(M)))
    out = (np.stack(stack), norm, alg.nilpotency_index is not None)
    _ad_power_cache[key] = out
    return out


def exp_ad_basis(alg: LieAlgebra, index: int, s: float) -> np.ndarray:
    """exp(s ad(a_index)) via the cached power stack (scaling and squaring)."""
    stack, norm, nilpotent = _ad_power_stack(alg, index)
    if nilpotent:
        powers = s ** np.arange(len(stack))
        return np.einsum("k,kij->ij", powers, stack)
    squarings = 0
    scaled = s
    if abs(s) * norm > 0.5:
        squarings = int(np.ceil(np.log2(abs(s) * norm / 0.5)))
        scaled = s / (2.0**squarings)
    powers = scaled ** np.arange(len(stack))
    out = np.einsum("k,kij->ij", powers, stack)
    for _ in range(squarings):
        out = out @ out
    return out


def exp_ad(alg: LieAlgebra, a, s: float = 1.0) -> np.ndarray:
    """exp(s ad(a)); exact truncation for nilpotent algebras."""
    coeffs = a.coeffs if isinstance(a, AlgebraVector) else np.asarray(a, dtype=float)
    nz = np.nonzero(coeffs)[0]
    if len(nz) == 1:
        return exp_ad_basis(alg, int(nz[0]), s * float(coeffs[nz[0]]))
    if len(nz) == 0:
        return np.eye(alg.dim)
    M = s * ad_matrix(alg, coeffs)
    k = alg.nilpotency_index
    if k is not None:
        out = np.eye(alg.dim)
        term = np.eye(alg.dim)
        for j in range(1, k):
            term = term @ M / j
            out = out + term
        return out
    return _expm_taylor(M)


def span_is_subalgebra(alg: LieAlgebra, span) -> dict:
    """Flags {'subalgebra': bool, 'ideal': bool} for the given span.

    The span must be linearly independent (singular-value ratio below
    1e-10 rejects it).  Residuals are distances of brackets to the span.
    """
    vecs = [v.coeffs if isinstance(v, AlgebraVector) else np.asarray(v, float) for v in span]
    S = np.column_stack(vecs)
    sv = np.linalg.svd(S, compute_uv=False)
    if sv[-1] < _SPAN_SVD_RATIO * sv[0]:
        raise LieSysError("span vectors are linearly dependent")
    proj = S @ np.linalg.pinv(S)

    def _off_span(w):
        return float(np.max(np.abs(w - proj @ w))) if np.max(np.abs(w)) else 0.0

    sub_res = 0.0
    for i in range(len(vecs)):
        for j in range(len(vecs)):
            sub_res = max(sub_res, _off_span(bracket_coords(alg, vecs[i], vecs[j])))
    ideal_res = sub_res
    basis = np.eye(alg.dim)
    for v in vecs:
        for b in basis:
            ideal_res = max(ideal_res, _off_span(bracket_coords(alg, b, v)))
    return {
        "subalgebra": sub_res <= 1e-10,
        "ideal": ideal_res <= 1e-10,
        "subalgebra_residual": sub_res,
        "ideal_residual": ideal_res,
    }


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def algebra_from_triples(dim, triples, name="", labels=()):
    """Build an algebra from nonzero (alpha, beta, gamma, value) with 1-based
    indices; the antisymmetric counterpart is filled in automatically."""
    c = np.zeros((dim, dim, dim))
    for a, b, g, val in triples:
        c[a - 1, b - 1, g - 1] = val
        c[b - 1, a - 1, g - 1] = -val
    return LieAlgebra(dim, c, tuple(labels), name)


def load_algebra_file(path_or_text) -> LieAlgebra:
    """Parse the structured text format: 'dim N' then lines 'a b g value'."""
    if hasattr(path_or_text, "read"):
        text = path_or_text.read()
    else:
        text = str(path_or_text)
        if "\n" not in text and not text.strip().startswith("dim"):
            with open(text) as fh:
                text = fh.read()
    dim = None
    name = ""
    triples = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "dim":
            dim = int(parts[1])
        elif parts[0] == "name":
            name = parts[1]
        else:
            a, b, g = int(parts[0]), int(parts[1]), int(parts[2])
            triples.append((a, b, g, float(parts[3])))
    if dim is None:
        raise LieSysError("algebra file missing 'dim' line")
    return algebra_from_triples(dim, triples, name)


def _from_data(fname) -> LieAlgebra:
    ref = resources.files("liesys").joinpath("algebra_data", fname)
    return load_algebra_file(ref.read_text())


def _gbar(n: int) -> LieAlgebra:
    # [a1, ak] = a_{k+1}, k = 2..n-1; gbar_2 is the Abelian plane.
    if n < 2:
        raise UnknownNameError("gbar requires n >= 2")
    triples = [(1, k, k + 1, 1.0) for k in range(2, n)]
    return algebra_from_triples(n, triples, f"gbar{n}")


def _geps(eps: float) -> LieAlgebra:
    if eps not in (-1, 0, 1):
        raise UnknownNameError("g_eps requires eps in {-1, 0, 1}")
    return algebra_from_triples(
        3, [(1, 2, 3, 1.0), (1, 3, 2, -1.0), (2, 3, 1, float(eps))], f"geps({eps:+d})"
    )


_FILE_BACKED = {
    "h3": "h3.alg",
    "h3c": "h3c.alg",
    "h3q": "h3q.alg",
    "oscq": "oscq.alg",
    "g4": "g4.alg",
    "g5": "g5.alg",
    "g7": "g7.alg",
    "g8": "g8.alg",
    "se2": "se2.alg",
    "so3": "so3.alg",
    "sl2": "sl2.alg",
    "sl3": "sl3.alg",
    "se3": "se3.alg",
    "aff": "aff.alg",
    "r2sl2": "r2sl2.alg",
    "r2sl2yz": "r2sl2yz.alg",
    "hsp2": "hsp2.alg",
}

_cache: dict = {}


def catalog_algebra(name: str, n: int | None = None, eps: float | None = None) -> LieAlgebra:
    """Look up a catalog algebra by name.

    Parametrized families: 'gbar' needs n >= 2, 'g_eps' needs eps in {-1,0,1}.
    """
    key = (name, n, eps)
    if key in _cache:
        return _cache[key]
    if name == "gbar":
        if n is None:
            raise UnknownNameError("gbar requires the family parameter n")
        alg = _gbar(n)
    elif name == "g_eps":
        if eps is None:
            raise UnknownNameError("g_eps requires the family parameter eps")
        alg = _geps(eps)
    elif name in _FILE_BACKED:
        alg = _from_data(_FILE_BACKED[name])
        object.__setattr__(alg, "name", name)
    else:
        raise UnknownNameError(f"unknown algebra {name!r}")
    _cache[key] = alg
    return alg


def catalog_names():
    return sorted(_FILE_BACKED) + ["gbar", "g_eps"]
