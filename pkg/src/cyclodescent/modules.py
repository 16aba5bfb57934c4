"""Finite abelian p-groups with commuting Delta- and gamma-actions.

A module is ``Z/p^{a_1} + ... + Z/p^{a_r}`` with ``a_1 >= ... >= a_r``.  An
endomorphism is an ``r x r`` integer matrix whose column ``j`` is the image of
the ``j``-th generator; entry ``(i, j)`` must be divisible by
``p^max(0, a_i - a_j)`` and is stored reduced modulo ``p^{a_i}``.

Kernels, images and quotients are computed on the integer lift
``Z^r / L`` with ``L = diag(p^a) Z^r``, so all structure comes out of
integer Smith forms rather than linear algebra over ``Z/p^N``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import (
    ActionOrderInvalid,
    IllDefinedEndomorphism,
    MissingAction,
    NonInvertibleAction,
    ValidationError,
)
from .normal_forms import (
    column,
    from_columns,
    integer_kernel,
    lattice_basis,
    matmul,
    matvec,
    smith_normal_form,
)
from .padic import check_prime, primitive_root, teichmuller

Matrix = tuple  # tuple of row tuples

ACTIONS = ("delta_action", "gamma_action")


def _as_matrix(A, r) -> list[list[int]]:
    rows = [list(map(int, row)) for row in A]
    if len(rows) != r or any(len(row) != r for row in rows):
        raise ValidationError(f"expected a {r}x{r} matrix")
    return rows


def normalize_endo(p: int, orders: Sequence[int], A, name: str = "endomorphism") -> Matrix:
    """Check well-definedness and reduce row ``i`` modulo ``p^{a_i}``."""
    r = len(orders)
    rows = _as_matrix(A, r)
    for i in range(r):
        for j in range(r):
            need = max(0, orders[i] - orders[j])
            if rows[i][j] % p**need:
                raise IllDefinedEndomorphism(
                    f"{name}[{i}][{j}] = {rows[i][j]} is not divisible by {p}^{need}"
                )
        rows[i] = [x % p ** orders[i] for x in rows[i]]
    return tuple(tuple(row) for row in rows)


def _relations(p, orders):
    return [[p**a if i == k else 0 for i in range(len(orders))] for k, a in enumerate(orders)]


def _reduce_vec(p, orders, x):
    return [v % p**a for v, a in zip(x, orders)]


@dataclass(frozen=True)
class FinitePModule:
    p: int
    orders: tuple
    delta_action: Optional[Matrix] = None
    gamma_action: Optional[Matrix] = None

    def __post_init__(self):
        check_prime(self.p)
        orders = tuple(int(a) for a in self.orders)
        if any(a < 1 for a in orders):
            raise ValidationError("orders must be positive exponents", "orders")
        if any(orders[i] < orders[i + 1] for i in range(len(orders) - 1)):
            raise ValidationError("orders must be sorted in descending order", "orders")
        object.__setattr__(self, "orders", orders)
        for name in ACTIONS:
            A = getattr(self, name)
            if A is not None:
                A = normalize_endo(self.p, orders, A, name)
                object.__setattr__(self, name, A)
                if not is_automorphism(self.p, orders, A):
                    raise NonInvertibleAction(f"{name} is not invertible")
        D, G = self.delta_action, self.gamma_action
        if D is not None:
            if _mat_pow(self.p, orders, D, self.p - 1) != _identity_endo(orders):
                raise ActionOrderInvalid(f"delta_action does not have order dividing {self.p - 1}")
        if D is not None and G is not None:
            if _compose(self.p, orders, D, G) != _compose(self.p, orders, G, D):
                raise ValidationError("delta_action and gamma_action do not commute")

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def log_order(self) -> int:
        return sum(self.orders)

    @property
    def size(self) -> int:
        return self.p**self.log_order

    @property
    def exponent(self) -> int:
        return self.orders[0] if self.orders else 0

    def structure(self) -> FinitePModule:
        return FinitePModule(self.p, self.orders)

    def is_zero(self) -> bool:
        return not self.orders

    def require(self, name: str) -> Matrix:
        A = getattr(self, name)
        if A is None:
            raise MissingAction(f"module has no {name}")
        return A

    def apply(self, A, x) -> tuple:
        return tuple(_reduce_vec(self.p, self.orders, matvec(A, x)))

    def with_actions(self, delta=None, gamma=None) -> FinitePModule:
        return FinitePModule(self.p, self.orders, delta, gamma)

    def to_json(self) -> dict:
        out = {"p": self.p, "orders": list(self.orders)}
        out["delta"] = [list(r) for r in self.delta_action] if self.delta_action is not None else None
        out["gamma"] = [list(r) for r in self.gamma_action] if self.gamma_action is not None else None
        return out

    @classmethod
    def from_json(cls, data: dict, path: str = "module") -> FinitePModule:
        if not isinstance(data, dict):
            raise ValidationError("expected an object", path)
        unknown = set(data) - {"p", "orders", "delta", "gamma"}
        if unknown:
            raise ValidationError(f"unknown keys {sorted(unknown)}", path)
        for key in ("p", "orders"):
            if key not in data:
                raise ValidationError("missing key", f"{path}.{key}")
        try:
            return cls(data["p"], tuple(data["orders"]), data.get("delta"), data.get("gamma"))
        except ValidationError as exc:
            inner = str(exc)
            if exc.path is not None and inner.startswith(f"{exc.path}: "):
                inner = inner[len(exc.path) + 2 :]
            full = path if exc.path is None else f"{path}.{exc.path}"
            raise type(exc)(inner, full) from exc

    def __repr__(self):
        parts = " + ".join(f"Z/{self.p}^{a}" for a in self.orders) or "0"
        return f"FinitePModule({parts})"


@dataclass(frozen=True)
class GradedPieces:
    """Structure-only constituents: ``coker_part`` sits below ``ker_part``."""

    coker_part: FinitePModule
    ker_part: FinitePModule
    notes: tuple = field(default=())

    @property
    def log_order(self) -> int:
        return self.coker_part.log_order + self.ker_part.log_order

    def to_json(self) -> dict:
        return {
            "coker_part": list(self.coker_part.orders),
            "ker_part": list(self.ker_part.orders),
            "log_order": self.log_order,
            "notes": list(self.notes),
        }


def _identity_endo(orders):
    return tuple(tuple(int(i == j) for j in range(len(orders))) for i in range(len(orders)))


def _compose(p, orders, A, B):
    """Matrix of ``A o B``, reduced."""
    prod = matmul([list(r) for r in A], [list(r) for r in B])
    return tuple(tuple(x % p ** orders[i] for x in row) for i, row in enumerate(prod))


def _mat_pow(p, orders, A, e):
    result = _identity_endo(orders)
    base = A
    while e:
        if e & 1:
            result = _compose(p, orders, result, base)
        base = _compose(p, orders, base, base)
        e >>= 1
    return result


def compose(M: FinitePModule, A, B) -> Matrix:
    return _compose(M.p, M.orders, A, B)


def mat_pow(M: FinitePModule, A, e: int) -> Matrix:
    return _mat_pow(M.p, M.orders, A, e)


def scalar_shift(M: FinitePModule, A, c: int) -> Matrix:
    """``A - c`` as an endomorphism of ``M``."""
    r = M.rank
    rows = [[A[i][j] - (c if i == j else 0) for j in range(r)] for i in range(r)]
    return normalize_endo(M.p, M.orders, rows)


def linear_combination(M: FinitePModule, terms) -> Matrix:
    """``sum c_k A_k`` for pairs ``(c_k, A_k)``."""
    r = M.rank
    rows = [[0] * r for _ in range(r)]
    for c, A in terms:
        for i in range(r):
            for j in range(r):
                rows[i][j] += c * A[i][j]
    return normalize_endo(M.p, M.orders, rows)


# lattice machinery -----------------------------------------------------------


class _Basis:
    """A basis ``W`` (columns) of a full-rank lattice, with exact coordinate solving."""

    def __init__(self, cols, dim):
        self.cols = cols
        self.dim = dim
        self.snf = smith_normal_form(from_columns(cols, dim))

    def coords(self, x):
        ux = matvec(self.snf.U, x)
        z = []
        for a, d in zip(ux, self.snf.diag):
            if a % d:
                return None
            z.append(a // d)
        return matvec(self.snf.V, z)


def is_automorphism(p, orders, A) -> bool:
    r = len(orders)
    if r == 0:
        return True
    G = [list(A[i]) + [p**orders[i] if k == i else 0 for k in range(r)] for i in range(r)]
    snf = smith_normal_form(G)
    return snf.rank == r and all(d == 1 for d in snf.diag)


def automorphism_inverse(M: FinitePModule, A) -> Matrix:
    p, orders, r = M.p, M.orders, M.rank
    if r == 0:
        return ()
    G = [list(A[i]) + [p**orders[i] if k == i else 0 for k in range(r)] for i in range(r)]
    snf = smith_normal_form(G)
    if snf.rank != r or any(d != 1 for d in snf.diag):
        raise NonInvertibleAction("endomorphism is not an automorphism")
    cols = []
    for k in range(r):
        z = [snf.U[i][k] for i in range(r)] + [0] * r
        cols.append(matvec(snf.V, z)[:r])
    return normalize_endo(p, orders, from_columns(cols, r))


@dataclass(frozen=True)
class Subquotient:
    """A module built from ``M`` with maps back to and from ``M``'s coordinates.

    For a submodule, ``generators`` are the images in ``M`` of the new basis.
    For a quotient, ``projection`` sends ``M``'s coordinates to the new ones.
    """

    module: FinitePModule
    generators: Optional[tuple] = None
    projection: Optional[tuple] = None


def _sorted_perm(orders):
    return sorted(range(len(orders)), key=lambda i: -orders[i])


def submodule(M: FinitePModule, gens, actions: Sequence[str] = ACTIONS) -> Subquotient:
    """Submodule generated by the integer vectors ``gens``, with induced actions."""
    p, orders, r = M.p, M.orders, M.rank
    if r == 0:
        return Subquotient(M, generators=())
    L = _relations(p, orders)
    W = lattice_basis([list(g) for g in gens] + L, r)
    base = _Basis(W, r)
    X = [base.coords(col) for col in L]
    snf = smith_normal_form(from_columns(X, r))
    Wn = matmul(from_columns(W, r), snf.Uinv)
    keep = [k for k in range(r) if snf.diag[k] > 1]
    keep = [keep[i] for i in _sorted_perm([snf.diag[k] for k in keep])]
    new_orders = tuple(_log(p, snf.diag[k]) for k in keep)
    new_cols = [column(Wn, k) for k in keep]
    # coordinates in the new basis come from U2 * coords_W(x), valid since W' = W U2^{-1}
    induced = {}
    for name in actions:
        A = getattr(M, name)
        if A is None:
            continue
        rows = [[0] * len(keep) for _ in keep]
        for jj, w in enumerate(new_cols):
            img = matvec(A, w)
            y = base.coords(img)
            if y is None:
                raise ValidationError(f"{name} does not preserve the submodule")
            y = matvec(snf.U, y)
            for ii, k in enumerate(keep):
                rows[ii][jj] = y[k]
        induced[name] = rows
    gens_out = tuple(tuple(_reduce_vec(p, orders, w)) for w in new_cols)
    sub = FinitePModule(p, new_orders, induced.get("delta_action"), induced.get("gamma_action"))
    return Subquotient(sub, generators=gens_out)


def quotient(M: FinitePModule, gens, actions: Sequence[str] = ACTIONS) -> Subquotient:
    """``M`` modulo the submodule generated by ``gens``, with induced actions."""
    p, orders, r = M.p, M.orders, M.rank
    if r == 0:
        return Subquotient(M, projection=())
    L = _relations(p, orders)
    W = lattice_basis([list(g) for g in gens] + L, r)
    snf = smith_normal_form(from_columns(W, r))
    keep = [k for k in range(r) if snf.diag[k] > 1]
    keep = [keep[i] for i in _sorted_perm([snf.diag[k] for k in keep])]
    new_orders = tuple(_log(p, snf.diag[k]) for k in keep)
    induced = {}
    for name in actions:
        A = getattr(M, name)
        if A is None:
            continue
        conj = matmul(matmul(snf.U, [list(row) for row in A]), snf.Uinv)
        induced[name] = [[conj[i][j] for j in keep] for i in keep]
    proj = tuple(tuple(snf.U[i][j] % snf.diag[i] for j in range(r)) for i in keep)
    quo = FinitePModule(p, new_orders, induced.get("delta_action"), induced.get("gamma_action"))
    return Subquotient(quo, projection=proj)


def _log(p, d):
    e = 0
    while d % p == 0:
        d //= p
        e += 1
    if d != 1:
        raise ArithmeticError("invariant factor is not a power of p")
    return e


def kernel_lattice_gens(M: FinitePModule, psi) -> list[list[int]]:
    """Integer generators of ``{x : psi x in L}``."""
    p, orders, r = M.p, M.orders, M.rank
    G = [list(psi[i]) + [-(p**orders[i]) if k == i else 0 for k in range(r)] for i in range(r)]
    return [v[:r] for v in integer_kernel(G, 2 * r)]


def kernel(M: FinitePModule, psi, actions: Sequence[str] = ACTIONS) -> Subquotient:
    psi = normalize_endo(M.p, M.orders, psi)
    if M.rank == 0:
        return Subquotient(M, generators=())
    return submodule(M, kernel_lattice_gens(M, psi), actions)


def image(M: FinitePModule, psi, actions: Sequence[str] = ACTIONS) -> Subquotient:
    psi = normalize_endo(M.p, M.orders, psi)
    return submodule(M, [column(psi, j) for j in range(M.rank)], actions)


def cokernel(M: FinitePModule, psi, actions: Sequence[str] = ACTIONS) -> Subquotient:
    psi = normalize_endo(M.p, M.orders, psi)
    return quotient(M, [column(psi, j) for j in range(M.rank)], actions)


def endo_ker_coker(M: FinitePModule, psi) -> GradedPieces:
    """Invariant factors of ``ker(psi)`` and ``coker(psi)``."""
    ker = kernel(M, psi, actions=()).module
    cok = cokernel(M, psi, actions=()).module
    if ker.log_order != cok.log_order:
        raise AssertionError("|ker| != |coker| for an endomorphism of a finite module")
    return GradedPieces(cok, ker)


def pontryagin_dual(M: FinitePModule) -> FinitePModule:
    """Dual module ``Hom(M, Q_p/Z_p)`` with ``(g f)(x) = f(g^{-1} x)``.

    The dual basis ``chi_k(e_i) = [i == k] / p^{a_k}`` gives the same orders;
    for ``B = A^{-1}`` the dual action has entry ``B[k][i] * p^{a_i - a_k}`` at
    ``(i, k)``, an exact integer by well-definedness of ``B``.
    """
    p, orders, r = M.p, M.orders, M.rank
    acts = {}
    for name in ACTIONS:
        A = getattr(M, name)
        if A is None:
            continue
        B = automorphism_inverse(M, A)
        rows = [[0] * r for _ in range(r)]
        for i in range(r):
            for k in range(r):
                e = orders[i] - orders[k]
                rows[i][k] = B[k][i] * p**e if e >= 0 else B[k][i] // p ** (-e)
        acts[name] = rows
    return FinitePModule(p, orders, acts.get("delta_action"), acts.get("gamma_action"))


def direct_sum(*mods: FinitePModule) -> FinitePModule:
    """Direct sum, with generators re-sorted by order."""
    if not mods:
        raise ValidationError("empty direct sum")
    p = mods[0].p
    orders = [a for m in mods for a in m.orders]
    r = len(orders)
    acts = {}
    for name in ACTIONS:
        if any(getattr(m, name) is None for m in mods):
            continue
        big = [[0] * r for _ in range(r)]
        off = 0
        for m in mods:
            A = getattr(m, name)
            for i in range(m.rank):
                for j in range(m.rank):
                    big[off + i][off + j] = A[i][j]
            off += m.rank
        acts[name] = big
    perm = _sorted_perm(orders)
    return permute(p, orders, acts, perm)


def permute(p, orders, acts, perm) -> FinitePModule:
    """Reorder generators: new generator ``k`` is old generator ``perm[k]``."""
    new_orders = tuple(orders[i] for i in perm)
    out = {}
    for name, A in acts.items():
        out[name] = [[A[perm[i]][perm[j]] for j in range(len(perm))] for i in range(len(perm))]
    return FinitePModule(p, new_orders, out.get("delta_action"), out.get("gamma_action"))


def conjugate(M: FinitePModule, P) -> FinitePModule:
    """Transport the actions along the automorphism ``P``: ``A -> P A P^{-1}``."""
    Pinv = automorphism_inverse(M, P)
    acts = {}
    for name in ACTIONS:
        A = getattr(M, name)
        if A is not None:
            acts[name] = compose(M, compose(M, P, A), Pinv)
    return FinitePModule(M.p, M.orders, acts.get("delta_action"), acts.get("gamma_action"))


# random generation -----------------------------------------------------------


def random_endo(rng: random.Random, p: int, orders) -> list[list[int]]:
    r = len(orders)
    return [
        [p ** max(0, orders[i] - orders[j]) * rng.randrange(p ** orders[i]) for j in range(r)]
        for i in range(r)
    ]


def random_automorphism(rng: random.Random, p: int, orders, steps: int = 6) -> Matrix:
    """Product of random elementary automorphisms ``e_i -> e_i + c p^k e_k`` and unit scalings."""
    r = len(orders)
    A = [[int(i == j) for j in range(r)] for i in range(r)]
    for _ in range(steps):
        if r >= 2 and rng.random() < 0.7:
            i, k = rng.sample(range(r), 2)
            c = rng.randrange(p ** orders[k]) * p ** max(0, orders[k] - orders[i])
            # column i gains c * column k
            for row in A:
                row[i] += c * row[k]
        elif r:
            i = rng.randrange(r)
            u = rng.randrange(1, p ** orders[i])
            while u % p == 0:
                u = rng.randrange(1, p ** orders[i])
            for row in A:
                row[i] *= u
    return normalize_endo(p, orders, A)


def random_pro_p_automorphism(rng: random.Random, p: int, orders) -> list[list[int]]:
    """A random automorphism of p-power order.

    The kernel of ``Aut(M) -> prod GL_{r_k}(F_p)`` (one factor per block of equal
    orders) is a p-group, so it suffices to make each equal-order diagonal block
    unipotent modulo p.
    """
    r = len(orders)
    Y = random_endo(rng, p, orders)
    for i in range(r):
        for j in range(r):
            if orders[i] == orders[j] and i >= j:
                Y[i][j] = p * (Y[i][j] // p) if i != j else p * rng.randrange(p ** orders[i])
            if i == j:
                Y[i][j] += 1
    return Y


def random_module(
    rng: random.Random,
    p: int,
    max_rank: int = 3,
    max_exp: int = 3,
    branches: Optional[Sequence[int]] = None,
    max_log_order: Optional[int] = None,
) -> FinitePModule:
    """Random module with commuting actions, Delta semisimple and gamma of p-power order.

    ``branches`` restricts the Delta-characters ``omega^j`` that occur.
    """
    while True:
        r = rng.randint(0, max_rank)
        orders = sorted((rng.randint(1, max_exp) for _ in range(r)), reverse=True)
        if max_log_order is None or sum(orders) <= max_log_order:
            break
    pool = list(branches) if branches is not None else list(range(p - 1))
    js = [rng.choice(pool) for _ in orders]
    top = orders[0] if orders else 1
    w = teichmuller(primitive_root(p), p, top).value
    D = [[pow(w, js[i], p ** orders[i]) if i == j else 0 for j in range(r)] for i in range(r)]
    G = random_pro_p_automorphism(rng, p, orders)
    for i in range(r):
        for j in range(r):
            if js[i] % (p - 1) != js[j] % (p - 1):
                G[i][j] = 0
    M = FinitePModule(p, tuple(orders), D, G)
    if r == 0:
        return M
    return conjugate(M, random_automorphism(rng, p, orders))


def cyclic(p: int, a: int, gamma: int = 1, delta: int = 1) -> FinitePModule:
    return FinitePModule(p, (a,), ((delta,),), ((gamma,),))
