"""Exact verifiers and equality classifiers for the determinant inequalities.

Every inequality of the form ``det A + sqrt(p) <= q`` is decided without square
roots as ``g = q - det A >= 0`` and ``g**2 >= p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, TypeVar

from .combinatorics import IndexSet, Permutation, is_transposition, orbits
from .exact import ONE, ZERO, GaussianRational, InputError, format_entry, format_rational
from .majorization import (
    check_frame,
    frame_congruence,
    frame_to_ds,
    is_permutation_ds,
    product,
    SpectrumVector,
)
from .matrix import (
    BlockPartition,
    Matrix,
    block_determinant_matrix,
    column_rank,
    columns_collinear,
    determinant,
    hadamard_product,
    is_block_diagonal,
    permutation_matrix,
)

__all__ = [
    "THEOREMS",
    "CASES",
    "VerdictReport",
    "ClassificationError",
    "is_psd",
    "is_pd",
    "is_f_matrix",
    "psd_diagnostic",
    "f_matrix_diagnostic",
    "matrix_class",
    "check_hadamard",
    "check_fischer",
    "check_zy",
    "check_refined",
    "classify_equality",
    "orbit_rank_condition",
    "per_index_collinearity",
    "check_frame_product",
    "check_frame_zy",
    "check_hadamard_product_form",
    "check_thompson",
    "check_block_zy",
]

THEOREMS = ("hadamard", "fischer", "zy", "refined", "frameProduct", "frameZY", "hprod",
            "thompson", "blockZY")

DIAGONAL = "diagonal"
COLLINEAR_ORBITS = "collinearOrbits"
BLOCK_DIAGONAL = "blockDiagonal"
TRANSPOSITION = "transpositionOnComplement"
NOT_EQUAL = "notEqual"
UNCLASSIFIED = "unclassified"
CASES = (DIAGONAL, COLLINEAR_ORBITS, BLOCK_DIAGONAL, TRANSPOSITION, NOT_EQUAL, UNCLASSIFIED)


class ClassificationError(RuntimeError):
    """An equality on a positive definite input matched none of the known conditions.

    This means either an implementation bug or a counterexample to a stated
    necessity claim; fuzz campaigns abort on it.
    """


@dataclass(frozen=True)
class VerdictReport:
    theorem: str
    holds: bool
    g: Fraction
    p: Fraction
    equality: bool
    case: str
    detail: dict = field(default_factory=dict, compare=False)

    @property
    def slack(self) -> Fraction:
        """``g**2 - p``; nonnegative whenever the inequality holds."""
        return self.g * self.g - self.p

    def to_json(self) -> dict:
        out = {
            "theorem": self.theorem,
            "holds": self.holds,
            "g": format_rational(self.g),
            "g_squared": format_rational(self.g * self.g),
            "p": format_rational(self.p),
            "equality": self.equality,
            "case": self.case,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


T = TypeVar("T")


def _memo(A: Matrix, key: str, compute: Callable[[], T]) -> T:
    cache = A.__dict__.setdefault("_facts", {})
    if key not in cache:
        cache[key] = compute()
    return cache[key]


def _real(z: GaussianRational, what: str) -> Fraction:
    if not z.is_real():
        raise InputError(f"{what} is not real: {format_entry(z)}")
    return z.real


def _complement(G: IndexSet, n: int) -> IndexSet:
    s = set(G)
    return tuple(i for i in range(n) if i not in s)


# -- matrix classes -----------------------------------------------------------

def psd_diagnostic(A: Matrix) -> str | None:
    """``None`` if ``A`` is positive semidefinite, else the reason it is not."""
    def compute():
        if not A.is_hermitian:
            return "matrix is not Hermitian"
        if is_pd(A):
            return None
        for G, m in A.principal_minors.items():
            if not m.is_real() or m.real < 0:
                return f"principal minor on {[g + 1 for g in G]} is {format_entry(m)}"
        return None
    return _memo(A, "psd", compute)


def is_psd(A: Matrix) -> bool:
    """Hermitian with every one of the 2^n - 1 principal minors nonnegative."""
    return psd_diagnostic(A) is None


def is_pd(A: Matrix) -> bool:
    """Hermitian with all leading principal minors positive (Sylvester)."""
    def compute():
        if not A.is_hermitian:
            return False
        if "principal_minors" in A.__dict__:
            minors = A.principal_minors
            leading = [minors[tuple(range(k))] for k in range(1, A.n + 1)]
        else:
            leading = [determinant(Matrix._wrap(tuple(r[:k] for r in A.rows[:k])))
                       for k in range(1, A.n)] + [A.det]
        return all(m.is_real() and m.real > 0 for m in leading)
    return _memo(A, "pd", compute)


def f_matrix_diagnostic(A: Matrix) -> str | None:
    def compute():
        if A.is_hermitian:
            # Hermitian F-matrices are exactly the positive semidefinite ones
            return psd_diagnostic(A)
        minors = A.principal_minors
        for G, m in minors.items():
            if not m.is_real():
                return f"principal minor on {[g + 1 for g in G]} is not real"
            if m.real < 0:
                return f"principal minor on {[g + 1 for g in G]} is negative"
        full = tuple(range(A.n))
        det = minors[full].real
        for G, m in minors.items():
            if len(G) == A.n:
                continue
            if det > m.real * minors[_complement(G, A.n)].real:
                return f"Fischer-type inequality fails for G={[g + 1 for g in G]}"
        return None
    return _memo(A, "fmatrix", compute)


def is_f_matrix(A: Matrix) -> bool:
    return f_matrix_diagnostic(A) is None


def matrix_class(A: Matrix) -> str:
    """One of ``pd``, ``psd``, ``fMatrix``, ``hermitian``, ``none``."""
    if A.is_hermitian:
        if is_pd(A):
            return "pd"
        return "psd" if is_psd(A) else "hermitian"
    return "fMatrix" if is_f_matrix(A) else "none"


def _diag_product(A: Matrix) -> GaussianRational:
    def compute():
        acc = ONE
        for z in A.diag():
            acc = acc * z
        return acc
    return _memo(A, "diagprod", compute)


def _hadamard_gap(A: Matrix) -> Fraction:
    return _memo(A, "hgap", lambda: _real(_diag_product(A) - A.det, "prod(a_ii) - det(A)"))


# -- Hadamard and Fischer ------------------------------------------------------

def check_hadamard(A: Matrix) -> VerdictReport:
    if not (is_psd(A) or is_f_matrix(A)):
        raise InputError(f"not an F-matrix: {f_matrix_diagnostic(A)}")
    g = _hadamard_gap(A)
    equality = g == 0
    if A.is_diagonal():
        case = DIAGONAL
    elif not equality:
        case = NOT_EQUAL
    elif is_pd(A):
        raise ClassificationError("Hadamard equality on a non-diagonal positive definite matrix")
    else:
        case = UNCLASSIFIED
    return VerdictReport("hadamard", g >= 0, g, Fraction(0), equality, case)


def check_fischer(A: Matrix, G: Sequence[int]) -> VerdictReport:
    G = tuple(sorted(G))
    if not G or len(G) >= A.n or len(set(G)) != len(G) or not all(0 <= g < A.n for g in G):
        raise InputError(f"G must be a nonempty proper subset of 1..{A.n}")
    if not is_psd(A):
        raise InputError(f"not positive semidefinite: {psd_diagnostic(A)}")
    Gc = _complement(G, A.n)
    minors = A.principal_minors
    g = minors[G].real * minors[Gc].real - A.det.real
    equality = g == 0
    off_block_zero = all(not A[i, j] for i in G for j in Gc)
    if off_block_zero:
        case = BLOCK_DIAGONAL
    elif not equality:
        case = NOT_EQUAL
    elif is_pd(A):
        raise ClassificationError("Fischer equality on a positive definite matrix "
                                  "that is not block diagonal")
    else:
        case = UNCLASSIFIED
    return VerdictReport("fischer", g >= 0, g, Fraction(0), equality, case)


# -- sharpened Hadamard inequality ------------------------------------------

def _pair_products(A: Matrix) -> tuple[tuple[GaussianRational, ...], ...]:
    def compute():
        r = A.rows
        return tuple(tuple(r[i][j] * r[j][i] for j in range(A.n)) for i in range(A.n))
    return _memo(A, "pairs", compute)


def _negative_pair(A: Matrix) -> tuple[int, int] | None:
    def compute():
        W = _pair_products(A)
        for i in range(A.n):
            for j in range(A.n):
                w = W[i][j]
                if not w.is_real() or w.real < 0:
                    return (i, j)
        return None
    return _memo(A, "negpair", compute)


def check_zy(A: Matrix, sigma: Permutation) -> VerdictReport:
    """``det A + (prod a_{i,s(i)} a_{s(i),i})^(1/2) <= prod a_ii`` for non-identity ``s``."""
    if sigma.n != A.n:
        raise InputError(f"permutation has size {sigma.n}, matrix is {A.n}x{A.n}")
    if sigma.is_identity():
        raise InputError("the permutation must not be the identity")
    if not is_f_matrix(A):
        raise InputError(f"not an F-matrix: {f_matrix_diagnostic(A)}")
    return _sharpened("zy", A, sigma)


def check_refined(A: Matrix, tau: Permutation) -> VerdictReport:
    """Derangement form for positive semidefinite ``A``: ``det A + prod |a_{i,tau(i)}| <= prod a_ii``."""
    _require_derangement(tau, A.n)
    if not is_psd(A):
        raise InputError(f"not positive semidefinite: {psd_diagnostic(A)}")
    return _sharpened("refined", A, tau)


def _sharpened(theorem: str, A: Matrix, sigma: Permutation) -> VerdictReport:
    g = _hadamard_gap(A)
    W = _pair_products(A)
    bad = _negative_pair(A)
    detail = {}
    if bad is None:
        # all pair products are real: multiply numerators and denominators as ints
        num = den = 1
        for i, j in enumerate(sigma.image):
            a, _, d = W[i][j].parts
            num *= a
            den *= d
        p = Fraction(num, den)
    else:
        acc = ONE
        for i, j in enumerate(sigma.image):
            acc = acc * W[i][j]
        p = acc.real
        detail["pair_product_violation"] = [bad[0] + 1, bad[1] + 1]
    g2 = g * g
    holds = g >= 0 and g2 >= p and bad is None
    equality = g2 == p
    report = VerdictReport(theorem, holds, g, p, equality, NOT_EQUAL, detail)
    if equality:
        report = _with_case(report, classify_equality(A, sigma, report))
    return report


def _with_case(report: VerdictReport, case: str) -> VerdictReport:
    return VerdictReport(report.theorem, report.holds, report.g, report.p, report.equality,
                         case, report.detail)


def _column_is_axis(A: Matrix, i: int) -> bool:
    """``A e_i`` collinear with ``e_i``: column ``i`` vanishes off the diagonal."""
    return all(not A.rows[r][i] for r in range(A.n) if r != i)


def classify_equality(A: Matrix, sigma: Permutation, report: VerdictReport | None = None) -> str:
    """Which sufficient condition for equality in the sharpened inequality applies.

    Raises :class:`ClassificationError` if none applies although ``A`` is
    positive definite.
    """
    if report is not None and not report.equality:
        raise InputError("classification requires an equality report")
    if A.is_diagonal():
        return DIAGONAL
    if not A.is_hermitian:
        return UNCLASSIFIED
    transposition = is_transposition(sigma)
    matched = True
    for i, j in enumerate(sigma.image):
        if i == j:
            ok = _column_is_axis(A, i)
        else:
            ok = transposition or columns_collinear(A, i, j)
        if not ok:
            matched = False
            break
    if matched:
        return TRANSPOSITION if transposition else COLLINEAR_ORBITS
    if is_pd(A):
        raise ClassificationError(
            f"equality on a positive definite matrix with sigma={sigma} matches no condition")
    return UNCLASSIFIED


def _require_derangement(tau: Permutation, n: int) -> None:
    if tau.n != n:
        raise InputError(f"permutation has size {tau.n}, expected {n}")
    if not tau.is_derangement():
        raise InputError(f"{tau} has a fixed point; a derangement is required")


def per_index_collinearity(A: Matrix, tau: Permutation) -> bool:
    return all(columns_collinear(A, i, j) for i, j in enumerate(tau.image))


def orbit_rank_condition(A: Matrix, tau: Permutation) -> bool:
    """Every orbit's block of columns has rank at most one."""
    _require_derangement(tau, A.n)
    return all(column_rank(A, J) <= 1 for J in orbits(tau))


def check_hadamard_product_form(A: Matrix, tau: Permutation) -> VerdictReport:
    """``det(A o I) >= det A + |det(A o P)|`` with ``P`` the matrix of ``tau``."""
    _require_derangement(tau, A.n)
    if not is_psd(A):
        raise InputError(f"not positive semidefinite: {psd_diagnostic(A)}")
    diag_det = _memo(A, "diagdet",
                     lambda: determinant(hadamard_product(A, Matrix.identity(A.n))))
    g = _real(diag_det - A.det, "det(A o I) - det(A)")
    off = determinant(hadamard_product(A, permutation_matrix(tau)))
    p = off.modulus_squared()
    equality = g * g == p
    report = VerdictReport("hprod", g >= 0 and g * g >= p, g, p, equality, NOT_EQUAL)
    if equality:
        report = _with_case(report, classify_equality(A, tau, report))
    return report


# -- frame versions -------------------------------------------------------------

def check_frame_product(lam: Sequence[Fraction], V: Matrix) -> VerdictReport:
    """``prod lam_i <= prod b_ii`` for ``B = V* diag(lam) V`` with ``V`` a frame."""
    lam = SpectrumVector(lam)
    S = frame_to_ds(V)
    B_diag = [sum((lam[j] * S.entries[j][i] for j in range(V.n)), Fraction(0))
              for i in range(V.n)]
    lhs = product(lam)
    rhs = product(B_diag)
    g = rhs - lhs
    equality = g == 0
    s_perm = is_permutation_ds(S)
    detail = {"lhs": format_rational(lhs), "rhs": format_rational(rhs),
              "s_is_permutation": s_perm}
    generic = V.n >= 3 and all(x > 0 for x in lam) and len(set(lam)) == V.n
    if equality and generic and not s_perm:
        raise ClassificationError(
            "equality with distinct positive spectrum but |v_ij|^2 is not a permutation matrix")
    case = UNCLASSIFIED if equality else NOT_EQUAL
    return VerdictReport("frameProduct", g >= 0, g, Fraction(0), equality, case, detail)


def frame_gram_entry(V: Matrix, i: int, k: int) -> GaussianRational:
    """Entry ``(i, k)`` of ``V* V``."""
    acc = ZERO
    for row in V.rows:
        if row[i] and row[k]:
            acc = acc + row[i].conjugate() * row[k]
    return acc


def check_frame_zy(lam: Sequence[Fraction], V: Matrix, tau: Permutation) -> VerdictReport:
    """``prod lam_i + prod |b_{i,tau(i)}| <= prod b_ii`` when ``(V*V)_{i,tau(i)} = 0``."""
    _require_derangement(tau, V.n)
    lam = SpectrumVector(lam)
    check_frame(V)
    for i, j in enumerate(tau.image):
        if frame_gram_entry(V, i, j):
            raise InputError(f"(V*V)[{i + 1},{j + 1}] is nonzero; the zero pattern fails at i={i + 1}")
    B = frame_congruence(lam, V)
    g = product(_real(b, "b_ii") for b in B.diag()) - product(lam)
    acc = ONE
    for i, j in enumerate(tau.image):
        acc = acc * B[i, j] * B[j, i]
    p = _real(acc, "off-diagonal product")
    equality = g * g == p
    holds = g >= 0 and g * g >= p
    # no equality conditions are known for this inequality
    return VerdictReport("frameZY", holds, g, p, equality,
                         UNCLASSIFIED if equality else NOT_EQUAL)


# -- block versions ---------------------------------------------------------------

def _require_pd(A: Matrix) -> None:
    if not is_pd(A):
        raise InputError("not positive definite")


def _block_dets(A: Matrix, part: BlockPartition) -> Matrix:
    key = f"blockdet{part.sizes}"
    return _memo(A, key, lambda: block_determinant_matrix(A, part))


def check_thompson(A: Matrix, part: BlockPartition) -> VerdictReport:
    """``det A <= det(det A_ij)``."""
    _require_pd(A)
    D = _block_dets(A, part)
    g = _real(D.det - A.det, "det(det A_ij) - det A")
    equality = g == 0
    block_diag = is_block_diagonal(A, part)
    if block_diag:
        case = BLOCK_DIAGONAL
    elif not equality:
        case = NOT_EQUAL
    elif part.sizes[0] == 1:
        # 1x1 blocks: det(det A_ij) is det A itself, so equality is automatic
        case = UNCLASSIFIED
    else:
        raise ClassificationError("equality in the block determinant inequality "
                                  "on a matrix that is not block diagonal")
    return VerdictReport("thompson", g >= 0, g, Fraction(0), equality, case)


def check_block_zy(A: Matrix, part: BlockPartition, tau: Permutation) -> VerdictReport:
    """``det A + prod |det A_{i,tau(i)}| <= prod det A_ii`` for a block derangement."""
    _require_derangement(tau, part.count)
    _require_pd(A)
    D = _block_dets(A, part)
    diag = product(_real(D[i, i], "diagonal block determinant") for i in range(part.count))
    g = diag - A.det.real
    p = product(D[i, j].modulus_squared() for i, j in enumerate(tau.image))
    holds = g >= 0 and g * g >= p
    equality = g * g == p
    block_diag = is_block_diagonal(A, part)
    if block_diag:
        case = BLOCK_DIAGONAL
    elif not equality:
        case = NOT_EQUAL
    elif part.sizes[0] == 1 and part.count == 2:
        # two 1x1 blocks: the inequality is the n = 2 identity
        case = UNCLASSIFIED
    else:
        raise ClassificationError("equality in the block sharpened inequality "
                                  "on a matrix that is not block diagonal")
    return VerdictReport("blockZY", holds, g, p, equality, case)
