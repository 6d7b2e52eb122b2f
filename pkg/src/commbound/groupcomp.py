"""Composition through a finite group: characters, invariance, and bounds.

Inner functions may take values in a finite Abelian group G (non-Abelian
groups are supported through user-supplied character tables with class
data).  The key structural condition is orthogonality of distinct character
matrices, which for Abelian G is equivalent to a group-invariance property of
the row/column pair multisets of the map, and which for G = Z_2^t degenerates
to per-block strong balance.

Element indexing: tuples (a_1, ..., a_k) with 0 <= a_j < m_j are packed in
mixed radix with the first modulus least significant, so for Z_2^n the
element index coincides with the point mask used by the Boolean modules.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .bounds import BoundReport, OMITTED_CONSTANT_WARNING
from .boolfn import BoolFunction
from .errors import ResourceLimitError
from .matrices import SignMatrix, balance_check, spectrum
from .simplex import OPTIMAL, SimplexError, solve_lp

MAX_GROUP_ORDER = 2 ** 14
_SUM_TOL = 1e-8  # zero tests scale with multiset size
_IM_SLACK = 1e-9


class AbelianGroupSpec:
    """Direct product of cyclic groups Z_m1 x ... x Z_mk."""

    __slots__ = ("moduli", "order")

    def __init__(self, moduli):
        mods = tuple(int(m) for m in moduli)
        if not mods or any(m < 2 for m in mods):
            raise ValueError("every modulus must be an integer >= 2")
        order = 1
        for m in mods:
            order *= m
        if order > MAX_GROUP_ORDER:
            raise ValueError(f"group order {order} exceeds cap {MAX_GROUP_ORDER}")
        self.moduli = mods
        self.order = order

    def element(self, index: int) -> tuple:
        out = []
        for m in self.moduli:
            out.append(index % m)
            index //= m
        return tuple(out)

    def index(self, element) -> int:
        idx = 0
        for a, m in zip(reversed(element), reversed(self.moduli)):
            if not 0 <= a < m:
                raise ValueError(f"component {a} out of range for modulus {m}")
            idx = idx * m + a
        return idx

    def add(self, i: int, j: int) -> int:
        return self.index(tuple((a + b) % m for a, b, m in
                                zip(self.element(i), self.element(j), self.moduli)))

    def negate(self, i: int) -> int:
        return self.index(tuple((-a) % m for a, m in
                                zip(self.element(i), self.moduli)))

    def __eq__(self, other):
        return isinstance(other, AbelianGroupSpec) and self.moduli == other.moduli

    def __repr__(self):
        return f"AbelianGroupSpec({'x'.join(f'Z{m}' for m in self.moduli)})"


class CharacterTable:
    """Irreducible character values, one row per character.

    Rows must satisfy the orthogonality relation
    sum_g chi_i(g) conj(chi_j(g)) = |G| [i == j] and the entry bound
    |chi_i(g)| <= degrees[i].  For Abelian groups there are |G| rows, all of
    degree one, and classes are singletons.
    """

    __slots__ = ("h", "order", "table", "class_of", "degrees")

    def __init__(self, h: int, order: int, table, class_of, degrees):
        arr = np.asarray(table, dtype=complex)
        if arr.shape != (h, order):
            raise ValueError(f"character table must be {h}x{order}")
        cls = np.asarray(class_of, dtype=np.int64)
        if cls.shape != (order,) or cls.min() < 0 or cls.max() >= h:
            raise ValueError("class_of must map each element to a class index")
        degs = tuple(int(d) for d in degrees)
        if len(degs) != h or any(d < 1 for d in degs):
            raise ValueError("degrees must be positive, one per character")
        gram = arr @ arr.conj().T
        if abs(gram - order * np.eye(h)).max() > 1e-9 * max(order, 1):
            raise ValueError("character rows are not orthogonal")
        for i in range(h):
            if np.abs(arr[i]).max() > degs[i] + 1e-12:
                raise ValueError(f"character {i} exceeds its degree bound")
        arr = arr.copy()
        arr.setflags(write=False)
        self.h = h
        self.order = order
        self.table = arr
        self.class_of = cls
        self.degrees = degs

    def trivial_index(self) -> int:
        for i in range(self.h):
            if np.abs(self.table[i] - 1.0).max() <= 1e-9:
                return i
        raise ValueError("table has no trivial character row")

    @classmethod
    def from_json(cls, text: str) -> "CharacterTable":
        data = json.loads(text)
        table = [complex(re, im) for re, im in data["table"]]
        arr = np.asarray(table, dtype=complex).reshape(data["h"], data["order"])
        return cls(data["h"], data["order"], arr, data["class_of"],
                   data["degrees"])

    def to_json(self) -> str:
        flat = [[float(z.real), float(z.imag)] for z in self.table.flat]
        return json.dumps({
            "h": self.h,
            "order": self.order,
            "table": flat,
            "class_of": [int(c) for c in self.class_of],
            "degrees": list(self.degrees),
        })


def characters_abelian(G: AbelianGroupSpec) -> CharacterTable:
    """Full character table chi_a(x) = prod_j exp(2 pi i a_j x_j / m_j)."""
    order = G.order
    table = np.ones((order, order), dtype=complex)
    for a in range(order):
        at = G.element(a)
        for x in range(order):
            xt = G.element(x)
            phase = sum(aj * xj / m for aj, xj, m in zip(at, xt, G.moduli))
            table[a, x] = np.exp(2j * math.pi * phase)
    return CharacterTable(h=order, order=order, table=table,
                          class_of=np.arange(order), degrees=[1] * order)


class GroupMapMatrix:
    """Matrix of group elements g(x, y), stored as element indices."""

    __slots__ = ("group", "order", "entries")

    def __init__(self, entries, group: AbelianGroupSpec | None = None,
                 order: int | None = None):
        arr = np.asarray(entries, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("group map must be 2-dimensional")
        if group is not None:
            order = group.order
        if order is None:
            raise ValueError("either a group or an explicit order is required")
        if arr.min() < 0 or arr.max() >= order:
            raise ValueError("entries must be valid element indices")
        arr = arr.copy()
        arr.setflags(write=False)
        self.group = group
        self.order = order
        self.entries = arr

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @classmethod
    def from_sign_matrix(cls, M: SignMatrix) -> "GroupMapMatrix":
        """Encode a sign matrix over Z_2 with +1 -> 0 and -1 -> 1."""
        return cls((M.entries == -1).astype(np.int64), AbelianGroupSpec((2,)))

    @classmethod
    def from_sign_blocks(cls, blocks) -> "GroupMapMatrix":
        """Combine t sign matrices into one map over Z_2^t.

        Block 1 is the most significant factor of the row/column indices and
        corresponds to bit 0 of the element index.
        """
        blocks = list(blocks)
        t = len(blocks)
        if t == 0:
            raise ValueError("need at least one block")
        rows = 1
        cols = 1
        for b in blocks:
            rows *= b.rows
            cols *= b.cols
        entries = np.zeros((rows, cols), dtype=np.int64)
        row_idx = np.arange(rows)
        col_idx = np.arange(cols)
        r_div = rows
        c_div = cols
        for i, b in enumerate(blocks):
            r_div //= b.rows
            c_div //= b.cols
            xi = (row_idx // r_div) % b.rows
            yi = (col_idx // c_div) % b.cols
            zi = b.entries[np.ix_(xi, yi)]
            entries |= ((zi == -1).astype(np.int64)) << i
        return cls(entries, AbelianGroupSpec((2,) * t))

    @classmethod
    def from_text(cls, text: str) -> "GroupMapMatrix":
        """Parse the group-map format: header "group m1,m2,...", then one
        line per row of comma-separated tuples like "a1:a2"."""
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("group"):
            raise ValueError('group map must start with a "group m1,m2,..." line')
        moduli = [int(t) for t in lines[0][len("group"):].strip().split(",")]
        G = AbelianGroupSpec(moduli)
        rows = []
        for ln in lines[1:]:
            row = []
            for token in ln.split(","):
                parts = tuple(int(p) for p in token.split(":"))
                if len(parts) != len(moduli):
                    raise ValueError(
                        f"element {token!r} has {len(parts)} components, "
                        f"expected {len(moduli)}")
                row.append(G.index(parts))
            rows.append(row)
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise ValueError("all group-map rows must have equal length")
        return cls(rows, G)

    def to_text(self) -> str:
        if self.group is None:
            raise ValueError("only Abelian group maps have a text form")
        head = "group " + ",".join(str(m) for m in self.group.moduli)
        lines = [head]
        for row in self.entries:
            lines.append(",".join(
                ":".join(str(a) for a in self.group.element(int(v)))
                for v in row))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PairMultiset:
    """Multiset of element pairs, e.g. {(g(x,y), g(x',y)) : y}."""

    pairs: tuple          # ((s, t, multiplicity), ...) sorted
    total: int
    axis: str             # "row" or "col"
    indices: tuple        # (x, x') or (y, y')

    @classmethod
    def from_counter(cls, counter: Counter, axis: str, indices: tuple):
        pairs = tuple(sorted((s, t, m) for (s, t), m in counter.items()))
        return cls(pairs=pairs, total=sum(counter.values()),
                   axis=axis, indices=indices)

    def counter(self) -> Counter:
        return Counter({(s, t): m for s, t, m in self.pairs})


@dataclass(frozen=True)
class PairFamilies:
    row_pairs: dict   # (x, x') -> PairMultiset over y
    col_pairs: dict   # (y, y') -> PairMultiset over x


@dataclass(frozen=True)
class HardnessPartition:
    easy: frozenset
    hard: frozenset
    delta: float | None = None

    @classmethod
    def from_easy(cls, easy, h: int, delta: float | None = None):
        easy = frozenset(easy)
        if any(i < 0 or i >= h for i in easy):
            raise ValueError("easy indices out of range")
        return cls(easy=easy, hard=frozenset(range(h)) - easy, delta=delta)


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    divisible: bool
    copies: int | None
    counts: tuple
    diagonal_invariant: bool | None
    reason: str


@dataclass(frozen=True)
class GroupOrthogonalityReport:
    max_row_violation: float
    max_col_violation: float
    row_threshold: float
    col_threshold: float
    passed: bool
    pairs_checked: int


@dataclass(frozen=True)
class TPrimeReport:
    direct_max: float
    conjugated_max: float
    threshold: float
    direct_ok: bool
    conjugated_ok: bool
    agree: bool


@dataclass(frozen=True)
class DualClassFunction:
    """Dual function h: support off the easy span, l1 at most 2, correlation
    with f strictly above the distance delta."""

    h: np.ndarray
    delta: float
    easy_coeff_max: float
    l1: float
    correlation: float
    hard_support_ok: bool
    l1_ok: bool
    correlation_ok: bool

    @property
    def ok(self) -> bool:
        return self.hard_support_ok and self.l1_ok and self.correlation_ok


def pair_multisets(gmap: GroupMapMatrix) -> PairFamilies:
    """All row-pair multisets S^{x,x'} and column-pair multisets T^{y,y'}."""
    E = gmap.entries
    X, Y = E.shape
    row_pairs = {}
    for x in range(X):
        for x2 in range(X):
            cnt = Counter(zip(E[x, :].tolist(), E[x2, :].tolist()))
            row_pairs[(x, x2)] = PairMultiset.from_counter(cnt, "row", (x, x2))
    col_pairs = {}
    for y in range(Y):
        for y2 in range(Y):
            cnt = Counter(zip(E[:, y].tolist(), E[:, y2].tolist()))
            col_pairs[(y, y2)] = PairMultiset.from_counter(cnt, "col", (y, y2))
    return PairFamilies(row_pairs=row_pairs, col_pairs=col_pairs)


def g_invariant(T: PairMultiset, G: AbelianGroupSpec) -> bool:
    """Exact check that (s,s)T = T as multisets for every s in G."""
    base = T.counter()
    for s in range(1, G.order):
        shifted = Counter({(G.add(s, a), G.add(s, b)): m
                           for (a, b), m in base.items()})
        if shifted != base:
            return False
    return True


def orthogonality_sums(T: PairMultiset, table: CharacterTable) -> float:
    """max over i != j of |sum over T of chi_i(s) conj(chi_j(t))|."""
    if table.h < 2:
        return 0.0
    M = np.zeros((table.order, table.order))
    for s, t, m in T.pairs:
        M[s, t] += m
    E = table.table @ M @ table.table.conj().T
    mag = np.abs(E)
    np.fill_diagonal(mag, 0.0)
    return float(mag.max())


def regularity_check(gmap: GroupMapMatrix) -> RegularityReport:
    """Is the value multiset of g an exact multiple of G?

    Counts every element exactly; also reports whether the diagonal pair
    multisets are invariant (for Abelian maps), the hypothesis under which
    invariance already forces regularity.
    """
    E = gmap.entries
    total = E.size
    counts = np.bincount(E.reshape(-1), minlength=gmap.order)
    divisible = total % gmap.order == 0
    copies = total // gmap.order if divisible else None
    regular = divisible and bool((counts == copies).all())
    diag = None
    if gmap.group is not None:
        fam = pair_multisets(gmap)
        rows_ok = all(g_invariant(fam.row_pairs[(x, x)], gmap.group)
                      for x in range(gmap.rows))
        cols_ok = True
        if not rows_ok:
            cols_ok = all(g_invariant(fam.col_pairs[(y, y)], gmap.group)
                          for y in range(gmap.cols))
        diag = rows_ok or cols_ok
    if not divisible:
        reason = (f"matrix size {total} is not divisible by the group "
                  f"order {gmap.order}")
    elif not regular:
        reason = "element counts are not all equal"
    else:
        reason = ""
    return RegularityReport(regular=regular, divisible=divisible,
                            copies=copies, counts=tuple(int(c) for c in counts),
                            diagonal_invariant=diag, reason=reason)


def orthogonality_general(gmap: GroupMapMatrix, table: CharacterTable,
                          hard) -> GroupOrthogonalityReport:
    """Direct-summation check of the cross-character orthogonality condition.

    For all pairs of rows, columns, and distinct hard characters i, j the
    sums sum_y psi_i(g(x,y)) conj(psi_j(g(x',y))) (and the column analogue)
    must vanish; thresholds are 1e-8 * |Y| and 1e-8 * |X|.
    """
    hard = sorted(hard)
    X, Y = gmap.entries.shape
    mats = {i: table.table[i][gmap.entries] for i in hard}
    worst_row = 0.0
    worst_col = 0.0
    pairs = 0
    for ia, ib in itertools.combinations(hard, 2):
        A = mats[ia]
        B = mats[ib]
        worst_row = max(worst_row, float(np.abs(A @ B.conj().T).max()))
        worst_col = max(worst_col, float(np.abs(A.T @ B.conj()).max()))
        pairs += 1
    row_thr = _SUM_TOL * Y
    col_thr = _SUM_TOL * X
    return GroupOrthogonalityReport(
        max_row_violation=worst_row,
        max_col_violation=worst_col,
        row_threshold=row_thr,
        col_threshold=col_thr,
        passed=worst_row <= row_thr and worst_col <= col_thr,
        pairs_checked=pairs,
    )


def tprime_check(T: PairMultiset, table: CharacterTable) -> TPrimeReport:
    """Two independent routes to the same diagonalization statement.

    Route one sums chi_i(s) conj(chi_j(t)) directly over the multiset; route
    two class-averages the multiset into T', conjugates with the character
    matrix, and measures off-diagonal mass.  The two verdicts must agree.
    """
    h = table.h
    order = table.order
    # direct sums over the raw multiset
    direct = 0.0
    if h >= 2:
        for i in range(h):
            for j in range(h):
                if i == j:
                    continue
                acc = 0.0 + 0.0j
                for s, t, m in T.pairs:
                    acc += m * table.table[i, s] * np.conj(table.table[j, t])
                direct = max(direct, abs(acc))
    # class-averaged matrix conjugated by the table
    M = np.zeros((order, order))
    for s, t, m in T.pairs:
        M[s, t] += m
    cls = table.class_of
    class_sizes = np.bincount(cls, minlength=h)
    proj = np.zeros((h, order))
    proj[cls, np.arange(order)] = 1.0
    class_sum = proj @ M @ proj.T    # total mass per class pair
    Tprime = class_sum[np.ix_(cls, cls)] / np.outer(class_sizes[cls],
                                                    class_sizes[cls])
    E = table.table @ Tprime @ table.table.conj().T
    mag = np.abs(E)
    np.fill_diagonal(mag, 0.0)
    conjugated = float(mag.max()) if h >= 2 else 0.0
    thr = _SUM_TOL * max(T.total, 1)
    d_ok = direct <= thr
    c_ok = conjugated <= thr
    return TPrimeReport(direct_max=float(direct), conjugated_max=conjugated,
                        threshold=thr, direct_ok=d_ok, conjugated_ok=c_ok,
                        agree=d_ok == c_ok)


# ---------------------------------------------------------------------------
# distance to the easy span and its dual

def _span_lp_error(fvals: np.ndarray, rows: np.ndarray) -> float:
    """Chebyshev distance from a real f to the (complex) span of the given
    character rows, with the imaginary part of the approximant pinned to zero
    (within 1e-9)."""
    k, N = rows.shape
    if k == 0:
        return float(np.abs(fvals).max())
    re = rows.real.T    # N x k
    im = rows.imag.T
    # variables: Re c (+/-), Im c (+/-), delta
    nv = 4 * k + 1
    A_ub = np.zeros((4 * N, nv))
    b_ub = np.zeros(4 * N)
    # Re p(g) = re @ Rc - im @ Ic ; Im p(g) = im @ Rc + re @ Ic
    re_block = np.hstack([re, -re, -im, im])
    im_block = np.hstack([im, -im, re, -re])
    A_ub[:N, :4 * k] = -re_block
    A_ub[:N, -1] = -1.0
    b_ub[:N] = -fvals
    A_ub[N:2 * N, :4 * k] = re_block
    A_ub[N:2 * N, -1] = -1.0
    b_ub[N:2 * N] = fvals
    A_ub[2 * N:3 * N, :4 * k] = im_block
    b_ub[2 * N:3 * N] = _IM_SLACK
    A_ub[3 * N:, :4 * k] = -im_block
    b_ub[3 * N:] = _IM_SLACK
    c = np.zeros(nv)
    c[-1] = 1.0
    res = solve_lp(c, A_ub=A_ub, b_ub=b_ub)
    if res.status != OPTIMAL:
        raise SimplexError(f"span-distance LP returned {res.status}")
    return float(res.x[-1])


def distance_to_easy(fvals, table: CharacterTable, easy) -> float:
    """Entrywise (sup-norm) distance from f to the span of the easy characters."""
    fv = np.asarray(fvals, dtype=float)
    if fv.shape != (table.order,):
        raise ValueError("f must assign one real value per group element")
    easy = sorted(easy)
    rows = table.table[easy] if easy else np.zeros((0, table.order), complex)
    return _span_lp_error(fv, rows)


def dual_h(fvals, table: CharacterTable, easy) -> DualClassFunction:
    """Dual of the distance LP: a real h with no easy-character support,
    sum |h| <= 2, and |sum f conj(h)| strictly above the distance."""
    fv = np.asarray(fvals, dtype=float)
    if fv.shape != (table.order,):
        raise ValueError("f must assign one real value per group element")
    easy = sorted(easy)
    delta = distance_to_easy(fv, table, easy)
    N = table.order
    rows = table.table[easy] if easy else np.zeros((0, N), complex)
    eq_rows = []
    for r in rows:
        eq_rows.append(np.concatenate([r.real, -r.real]))
        eq_rows.append(np.concatenate([r.imag, -r.imag]))
    A_eq = np.array(eq_rows) if eq_rows else None
    b_eq = np.zeros(len(eq_rows)) if eq_rows else None
    A_ub = np.ones((1, 2 * N))
    b_ub = np.array([1.0])
    c = np.concatenate([-fv, fv])
    res = solve_lp(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq)
    if res.status != OPTIMAL:
        raise SimplexError(f"dual span LP returned {res.status}")
    v = res.x[:N] - res.x[N:]
    l1v = float(np.abs(v).sum())
    if l1v > 0:
        v = v / l1v
    h = 2.0 * v
    coeffs = table.table @ h / table.order  # h is real, so conj(h) = h
    easy_max = float(np.abs(coeffs[easy]).max()) if easy else 0.0
    l1 = float(np.abs(h).sum())
    corr = float(abs(fv @ h))
    return DualClassFunction(
        h=h, delta=delta, easy_coeff_max=easy_max, l1=l1, correlation=corr,
        hard_support_ok=easy_max <= _SUM_TOL,
        l1_ok=l1 <= 2.0 + 1e-9,
        correlation_ok=corr > delta,
    )


# ---------------------------------------------------------------------------
# bound evaluators

def general_bound(gmap: GroupMapMatrix, fvals, table: CharacterTable,
                  partition: HardnessPartition, epsilon: float) -> BoundReport:
    """Main term log2(sqrt(MN) (delta - 2 eps) / max_hard(max|psi| * ||[psi(g)]||)).

    Preconditions checked here: regularity of the map, orthogonality of the
    hard characters, a non-empty hard set, and delta > 2 eps.
    """
    report = BoundReport(theorem="general-group", applicable=True,
                         main_term=None, warnings=[OMITTED_CONSTANT_WARNING])
    fv = np.asarray(fvals, dtype=float)
    reg = regularity_check(gmap)
    if not reg.regular:
        report.applicable = False
        report.warnings.append(f"regularity fails: {reg.reason}")
        return report
    orth = orthogonality_general(gmap, table, partition.hard)
    if not orth.passed:
        report.applicable = False
        report.warnings.append(
            f"orthogonality fails: max violations {orth.max_row_violation:.3g} "
            f"(rows), {orth.max_col_violation:.3g} (cols)")
        return report
    if not partition.hard:
        report.applicable = False
        report.warnings.append("hard set is empty, no denominator")
        return report
    delta = partition.delta
    if delta is None:
        delta = distance_to_easy(fv, table, partition.easy)
    margin = delta - 2.0 * epsilon
    if margin <= 0:
        report.applicable = False
        report.intermediates = {"delta": delta, "epsilon": epsilon}
        report.warnings.append(
            f"delta - 2 eps = {margin:.6g} is not positive")
        return report
    MN = gmap.entries.size
    denom = 0.0
    per_char = {}
    for i in sorted(partition.hard):
        mat = table.table[i][gmap.entries]
        norm = spectrum(mat).spectral_norm
        peak = float(np.abs(table.table[i]).max())
        per_char[i] = {"spectral_norm": norm, "max_value": peak}
        denom = max(denom, peak * norm)
    report.main_term = math.log2(math.sqrt(MN) * margin / denom)
    report.intermediates = {
        "delta": delta,
        "epsilon": epsilon,
        "size": MN,
        "denominator": denom,
        "per_character": per_char,
    }
    return report


def _product_characters(tables, max_nonid: int):
    """Index tuples of product characters with at most max_nonid non-identity
    components, with their value rows over the product group.

    The first group is the least significant factor of the element index, so
    its table goes into the innermost Kronecker position.
    """
    trivial = [t.trivial_index() for t in tables]
    rows = []
    labels = []
    for combo in itertools.product(*[range(t.h) for t in tables]):
        nonid = sum(1 for c, tr in zip(combo, trivial) if c != tr)
        if nonid > max_nonid:
            continue
        row = np.ones(1, dtype=complex)
        for c, t in zip(reversed(combo), reversed(tables)):
            row = np.kron(row, t.table[c])
        rows.append(row)
        labels.append(combo)
    return labels, np.array(rows)


def product_approx_degree(fvals, tables, epsilon: float) -> int:
    """Smallest d for which characters with at most d non-identity components
    approximate f within epsilon in sup norm."""
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon}")
    tables = list(tables)
    fv = np.asarray(fvals, dtype=float)
    total = 1
    for t in tables:
        total *= t.order
    if fv.shape != (total,):
        raise ValueError(f"f must have one value per product element ({total})")
    t_count = len(tables)
    for d in range(t_count + 1):
        _, rows = _product_characters(tables, d)
        err = _span_lp_error(fv, rows)
        if err <= epsilon + 1e-9:
            return d
    raise SimplexError("full character set failed to represent f; "
                       "this should be impossible")


def block_group_bound(gmaps, fvals, tables) -> BoundReport:
    """Minimum over admissible character choices of the per-block log terms.

    main_term = min over subsets S with |S| > d and non-identity characters
    chi_i of sum_{i in S} log2(sqrt(size(M_gi)) / (deg(chi_i) ||[chi_i(g_i)]||)),
    where d is the product approximate degree of f at 1/3.  Exact, by
    enumeration (per-block minima are independent, so sorting suffices).
    """
    gmaps = list(gmaps)
    tables = list(tables)
    if len(gmaps) != len(tables):
        raise ValueError("need one character table per block")
    t = len(gmaps)
    norm_evals = sum(tb.h - 1 for tb in tables)
    if norm_evals > 4096:
        raise ResourceLimitError(
            f"block bound needs {norm_evals} character-norm evaluations "
            "(cap 4096)")
    report = BoundReport(theorem="block-group", applicable=True,
                         main_term=None, warnings=[OMITTED_CONSTANT_WARNING])
    for i, (gm, tb) in enumerate(zip(gmaps, tables)):
        reg = regularity_check(gm)
        orth = orthogonality_general(gm, tb, range(tb.h))
        if not (reg.regular and orth.passed):
            report.applicable = False
            report.warnings.append(
                f"block {i + 1} fails its structural condition "
                f"(regular={reg.regular}, orthogonal={orth.passed})")
            return report
    d = product_approx_degree(fvals, tables, 1.0 / 3.0)
    report.intermediates["d"] = d
    if d >= t:
        report.applicable = False
        report.warnings.append(
            f"no subset larger than d={d} exists among {t} blocks")
        return report
    best_term = []
    best_char = []
    for gm, tb in zip(gmaps, tables):
        trivial = tb.trivial_index()
        size = gm.entries.size
        terms = {}
        for c in range(tb.h):
            if c == trivial:
                continue
            norm = spectrum(tb.table[c][gm.entries]).spectral_norm
            terms[c] = math.log2(math.sqrt(size) / (tb.degrees[c] * norm))
        c_best = min(terms, key=lambda c: terms[c])
        best_term.append(terms[c_best])
        best_char.append(c_best)
    order = sorted(range(t), key=lambda i: best_term[i])
    best_total = None
    best_S = None
    for k in range(d + 1, t + 1):
        chosen = order[:k]
        tot = sum(best_term[i] for i in chosen)
        if best_total is None or tot < best_total:
            best_total = tot
            best_S = sorted(chosen)
    report.main_term = best_total
    report.intermediates.update({
        "per_block_best_term": list(best_term),
        "per_block_best_character": [int(c) for c in best_char],
        "chosen_blocks": [i + 1 for i in best_S],
    })
    return report


@dataclass(frozen=True)
class DegenerationReport:
    all_pairs_invariant: bool
    all_blocks_strongly_balanced: bool
    equivalent: bool


def degeneration_check(blocks) -> DegenerationReport:
    """Both sides of the Z_2-blocks equivalence, evaluated independently:
    invariance of every pair multiset of the combined map versus strong
    balance of every block."""
    blocks = list(blocks)
    gmap = GroupMapMatrix.from_sign_blocks(blocks)
    fam = pair_multisets(gmap)
    G = gmap.group
    invariant = all(g_invariant(T, G) for T in fam.row_pairs.values()) and \
        all(g_invariant(T, G) for T in fam.col_pairs.values())
    balanced = all(balance_check(b).strongly_balanced for b in blocks)
    return DegenerationReport(
        all_pairs_invariant=invariant,
        all_blocks_strongly_balanced=balanced,
        equivalent=invariant == balanced,
    )


def class_function_from_bool(f: BoolFunction) -> np.ndarray:
    """Values of f as a class function on Z_2^n (the indexings coincide)."""
    return f.table.astype(float)
