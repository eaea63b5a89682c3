"""Additive and multiplicative difference connections nabla_i = T_i^{-1} B_i."""
from __future__ import annotations

from dataclasses import dataclass, field

from .matrix import RingMatrix
from .poly import MultiPoly, PolyRing
from .ratfunc import RatFuncField
from .field import multiplicative_order


@dataclass
class ShiftConnection:
    """Difference connection data.

    additive: T_i shifts coordinate i by ``steps[i]`` (an int or a ring
    element such as a step variable ``t``); the orbit has length p = char.
    multiplicative: T_i multiplies coordinate i by ``q``, an element of exact
    order ``order`` in the prime field of the ring.
    """

    ring: PolyRing
    coords: list
    B: list
    kind: str = "additive"
    steps: list | None = None
    q: int | None = None
    order: int | None = None
    name: str = ""
    rf: RatFuncField = field(init=False)

    def __post_init__(self):
        self.rf = RatFuncField(self.ring)
        if len(self.B) != len(self.coords):
            raise ValueError("one matrix per coordinate is required")
        if self.kind == "additive":
            if self.steps is None:
                self.steps = [1] * len(self.coords)
            self.order = self.ring.p
        elif self.kind == "multiplicative":
            if self.q is None or self.order is None:
                raise ValueError("multiplicative connections need q and its order")
            if self.ring.p % self.order == 0:
                raise ValueError("characteristic divides the shift order")
            if multiplicative_order(self.q, self.ring.p) != self.order:
                raise ValueError(f"{self.q} does not have order {self.order} mod {self.ring.p}")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    def shift_map(self, i, power: int = 1) -> dict:
        name = self.coords[i] if isinstance(i, int) else i
        x = self.ring.var(name)
        pos = self.coords.index(name)
        if self.kind == "additive":
            step = self.steps[pos]
            step = step if isinstance(step, MultiPoly) else self.ring.const(step)
            return {name: x + step.scale(power)}
        return {name: x.scale(pow(self.q, power, self.ring.p))}

    def shifted(self, M: RingMatrix, i, power: int = 1) -> RingMatrix:
        sub = self.shift_map(i, power)
        return M.map(lambda a: a.substitute(sub))

    def p_curvature(self, i) -> RingMatrix:
        """Ordered product B_i(T^(n-1) x) ... B_i(T x) B_i(x) over the orbit of length n."""
        pos = i if isinstance(i, int) else self.coords.index(i)
        Bi = self.B[pos]
        C = Bi
        for j in range(1, self.order):
            C = self.shifted(Bi, pos, j) @ C
        return C.map(lambda a: a.normalize())

    def flatness_check(self) -> bool:
        r = len(self.coords)
        for i in range(r):
            for j in range(i + 1, r):
                lhs = self.shifted(self.B[i], j) @ self.B[j]
                rhs = self.shifted(self.B[j], i) @ self.B[i]
                if lhs != rhs:
                    return False
        return True

    def gauge(self, g: RingMatrix, g_inv: RingMatrix) -> ShiftConnection:
        """B_i -> g(T_i x) B_i(x) g(x)^-1."""
        B = [self.shifted(g, i) @ self.B[i] @ g_inv for i in range(len(self.coords))]
        return ShiftConnection(self.ring, self.coords, B, self.kind, self.steps, self.q, self.order, self.name)


def p_curvature_additive(conn: ShiftConnection, i) -> RingMatrix:
    if conn.kind != "additive":
        raise ValueError("expected an additive connection")
    return conn.p_curvature(i)


def p_curvature_multiplicative(conn: ShiftConnection, i) -> RingMatrix:
    if conn.kind != "multiplicative":
        raise ValueError("expected a multiplicative connection")
    return conn.p_curvature(i)


def shift_flatness_check(conn: ShiftConnection) -> bool:
    return conn.flatness_check()
