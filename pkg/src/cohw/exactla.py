"""Exact linear algebra over the rationals and the Gaussian rationals.

Scalars are ``fractions.Fraction`` (field tag ``'Q'``) or :class:`Gaussian`
(field tag ``'Qi'``).  All vectors and matrices are plain tuples/lists of
scalars; subspaces are canonically represented by reduced-row-echelon bases
with a fixed global coordinate order.  No floating point anywhere.
"""

from fractions import Fraction


class Gaussian:
    """A Gaussian rational a + b*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Gaussian is immutable")

    def conj(self):
        return Gaussian(self.re, -self.im)

    def is_rational(self):
        return self.im == 0

    def __add__(self, other):
        other = _gauss(other)
        return Gaussian(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_gauss(other))

    def __rsub__(self, other):
        return _gauss(other) + (-self)

    def __mul__(self, other):
        other = _gauss(other)
        return Gaussian(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _gauss(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian")
        return self * Gaussian(other.re / n, -other.im / n)

    def __rtruediv__(self, other):
        return _gauss(other) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, Gaussian):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return "Gaussian(%s, %s)" % (self.re, self.im)

    def __str__(self):
        return format_scalar(self)


def _gauss(x):
    if isinstance(x, Gaussian):
        return x
    return Gaussian(Fraction(x))


I = Gaussian(0, 1)


def scalar_conj(x):
    return x.conj() if isinstance(x, Gaussian) else x


def format_scalar(x):
    """Render a scalar as "a/b" or "a/b+c/d*i" (deterministic)."""
    if isinstance(x, Gaussian):
        if x.im == 0:
            return str(x.re)
        if x.re == 0:
            return "%s*i" % (x.im,)
        sign = "+" if x.im > 0 else "-"
        return "%s%s%s*i" % (x.re, sign, abs(x.im))
    return str(Fraction(x))


def parse_scalar(text, field="Q"):
    """Parse "a/b" or "a/b+c/d*i" / "a/b-c/d*i" / "c/d*i"."""
    text = text.strip().replace(" ", "")
    if field == "Q":
        return Fraction(text)
    if not text.endswith("*i") and "i" not in text:
        return Gaussian(Fraction(text))
    # split off the imaginary part
    if text.endswith("*i"):
        body = text[:-2]
    elif text.endswith("i"):
        body = text[:-1]
        if not body or body.endswith(("+", "-")):
            body += "1"
    else:
        raise ValueError("bad Gaussian literal: %r" % text)
    # find the split point between real and imaginary summands
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "+-/*":
            re_part, im_part = body[:k], body[k:]
            if im_part in ("+", "-"):
                im_part += "1"
            return Gaussian(Fraction(re_part), Fraction(im_part))
    return Gaussian(0, Fraction(body))


# ---------------------------------------------------------------------------
# vectors and matrices (lists of lists of scalars)

def vec_add(u, v):
    return [a + b for a, b in zip(u, v)]

def vec_sub(u, v):
    return [a - b for a, b in zip(u, v)]

def vec_scale(c, u):
    return [c * a for a in u]

def vec_neg(u):
    return [-a for a in u]

def vec_is_zero(u):
    return all(not bool(a) for a in u)

def zero_vec(n, field="Q"):
    z = Fraction(0) if field == "Q" else Gaussian(0)
    return [z] * n

def mat_vec(A, v):
    return [sum((a * x for a, x in zip(row, v)), _zero_like(row, v)) for row in A]

def _zero_like(row, v):
    for x in list(row) + list(v):
        if isinstance(x, Gaussian):
            return Gaussian(0)
    return Fraction(0)

def mat_mul(A, B):
    Bt = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col)), _zero_like(row, col))
             for col in Bt] for row in A]

def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]

def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]

def mat_eq(A, B):
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb):
            return False
        if any(a != b for a, b in zip(ra, rb)):
            return False
    return True

def identity_matrix(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

def zero_matrix(rows, cols):
    return [[Fraction(0)] * cols for _ in range(rows)]

def transpose(A):
    return [list(col) for col in zip(*A)]


def rref(rows):
    """Reduced row echelon form.  Returns (rows, pivot column list); zero
    rows dropped."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    out, pivots = [], []
    r = 0
    work = rows
    for c in range(ncols):
        # find a pivot in column c at or below row r
        piv = None
        for i in range(r, len(work)):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = 1 / work[r][c]
        work[r] = [inv * x for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    out = [row for row in work[:r]]
    return out, pivots


def rank(A):
    return len(rref(A)[0])


def solve_affine(A, b):
    """Solve A x = b exactly.  Returns (particular solution or None,
    kernel basis).  The kernel basis always spans ker(A)."""
    m = len(A)
    if m == 0:
        n = 0
    else:
        n = len(A[0])
        if any(len(row) != n for row in A):
            raise ValueError("ragged matrix")
    if len(b) != m:
        raise ValueError("dimension mismatch between A and b")
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    red, pivots = rref(aug)
    particular = None
    if all(p != n for p in pivots):  # consistent: no pivot in the b column
        x = zero_vec(n) if not _has_gaussian(A, b) else [Gaussian(0)] * n
        for row, p in zip(red, pivots):
            x[p] = row[n]
        particular = x
    kernel = kernel_basis(A, n)
    return particular, kernel


def _has_gaussian(A, b):
    for row in A:
        for x in row:
            if isinstance(x, Gaussian):
                return True
    return any(isinstance(x, Gaussian) for x in b)


def kernel_basis(A, ncols=None):
    """Echelon basis of ker(A)."""
    if ncols is None:
        if not A:
            raise ValueError("need ncols for empty matrix")
        ncols = len(A[0])
    red, pivots = rref(A)
    free = [c for c in range(ncols) if c not in pivots]
    one = Fraction(1)
    basis = []
    for f in free:
        v = zero_vec(ncols) if not _has_gaussian(A, []) else [Gaussian(0)] * ncols
        v[f] = one if not _has_gaussian(A, []) else Gaussian(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    eb, _ = rref(basis)
    return eb


def span_echelon(vectors):
    """Canonical (reduced echelon) basis of the span."""
    return rref(vectors)[0]


def in_span(vectors, v):
    """Is v in the span of the given vectors?"""
    if vec_is_zero(v):
        return True
    basis = span_echelon(vectors)
    return len(span_echelon(basis + [list(v)])) == len(basis)


def coords_in_basis(basis, v):
    """Coordinates of v in the given (independent) basis, or None."""
    if not basis:
        return [] if vec_is_zero(v) else None
    A = transpose(basis)
    x, _ = solve_affine(A, list(v))
    return x


def subspace_sum(U, V):
    return span_echelon(list(U) + list(V))


def subspace_intersect(U, V):
    """Echelon basis of span(U) n span(V)."""
    U = span_echelon(U)
    V = span_echelon(V)
    if not U or not V:
        return []
    n = len(U[0])
    # solve sum a_i u_i - sum b_j v_j = 0
    A = [[U[i][c] for i in range(len(U))] + [-V[j][c] for j in range(len(V))]
         for c in range(n)]
    ker = kernel_basis(A, len(U) + len(V))
    vecs = []
    for k in ker:
        v = zero_vec(n) if not _has_gaussian(U, []) else [Gaussian(0)] * n
        for i in range(len(U)):
            v = vec_add(v, vec_scale(k[i], U[i]))
        vecs.append(v)
    return span_echelon(vecs)


def complement_basis(U, ambient_dim):
    """Canonical complement of span(U): the non-pivot coordinate subspace."""
    _, pivots = rref(U)
    gaussian = _has_gaussian(U, [])
    basis = []
    for c in range(ambient_dim):
        if c not in pivots:
            v = zero_vec(ambient_dim) if not gaussian else [Gaussian(0)] * ambient_dim
            v[c] = Fraction(1) if not gaussian else Gaussian(1)
            basis.append(v)
    return basis


def subspace_ops(U, V, ambient_dim):
    """Sum, intersection and quotient data for two subspaces.

    Returns a dict with echelon bases for the sum and intersection, the
    dimension of sum/intersection, and the canonical complement of the sum
    inside the ambient space (non-pivot coordinates)."""
    s = subspace_sum(U, V)
    i = subspace_intersect(U, V)
    return {
        "sum": s,
        "intersection": i,
        "quotient_dim": len(s) - len(i),
        "complement": complement_basis(s, ambient_dim),
    }


# ---------------------------------------------------------------------------
# realification and conjugation-fixed subspaces

def realify_vector(v):
    """(z_1..z_n) over Qi  ->  (re z_1, im z_1, ..., re z_n, im z_n) over Q."""
    out = []
    for z in v:
        z = _gauss(z)
        out.append(z.re)
        out.append(z.im)
    return out


def unrealify_vector(v):
    return [Gaussian(v[2 * k], v[2 * k + 1]) for k in range(len(v) // 2)]


def conj_vector(v):
    return [scalar_conj(x) for x in v]


def conjugate_fixed(W):
    """Rational subspace of conjugation-fixed vectors of span(W) n conj(span(W)).

    W is a list of Gaussian vectors; the result is a rational echelon basis."""
    if not W:
        return []
    n = len(W[0])
    real_span = []
    for w in W:
        real_span.append(realify_vector(w))
        real_span.append(realify_vector(vec_scale(I, list(w))))
    conj_span = []
    for w in W:
        cw = conj_vector(list(w))
        conj_span.append(realify_vector(cw))
        conj_span.append(realify_vector(vec_scale(I, cw)))
    # vectors with all imaginary coordinates zero
    real_plane = []
    for k in range(n):
        v = [Fraction(0)] * (2 * n)
        v[2 * k] = Fraction(1)
        real_plane.append(v)
    inter = subspace_intersect(subspace_intersect(real_span, conj_span), real_plane)
    rational = [[v[2 * k] for k in range(n)] for v in inter]
    return span_echelon(rational)


class FilteredSpace:
    """An ascending or descending chain of nested subspaces of a fixed
    ambient coordinate space, each stored in canonical echelon form."""

    def __init__(self, ambient_dim, levels, ascending=True, indices=None):
        self.ambient_dim = ambient_dim
        self.levels = [span_echelon(b) for b in levels]
        self.ascending = ascending
        self.indices = list(indices) if indices is not None else list(range(len(levels)))
        seq = self.levels if ascending else list(reversed(self.levels))
        for small, big in zip(seq, seq[1:]):
            for v in small:
                assert in_span(big, v) or not big and vec_is_zero(v), \
                    "filtration levels not nested"

    def dims(self):
        return [len(b) for b in self.levels]

    def level(self, idx):
        return self.levels[self.indices.index(idx)]
