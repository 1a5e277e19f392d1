"""Closed-form forbidden numbers and bounds, in exact integer arithmetic.

Every family evaluates to a :class:`ForbValue`.  When a family's exactness
hypothesis fails, the status degrades to the side of the bound that still
holds.  Values asserted without a checkable argument are ``unverified``.  Binomials vanish outside ``0 <= k <= n`` and ``0**0 == 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Sequence


class FormulaError(ValueError):
    pass


class Status(str, Enum):
    EXACT = "exact"
    LOWER = "lower_bound"
    UPPER = "upper_bound"
    UNVERIFIED = "unverified"


def C(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def _room(base: int, exp: int, need: int) -> bool:
    """``base**exp >= need`` where a negative exponent means nothing has to be appended."""
    if exp < 0:
        return True
    return base**exp >= need


def _m_pow(m: int, base: int, exp: int) -> int:
    """``m * base**exp`` with the term read as 0 when ``m == 0``."""
    return 0 if m == 0 else m * base**exp


@dataclass(frozen=True)
class ForbValue:
    value: int
    status: Status
    hypothesis_ok: bool
    hypothesis_text: str
    upper: int | None = None

    @property
    def exact(self) -> bool:
        return self.status is Status.EXACT

    def to_json(self) -> dict:
        out = {
            "value": str(self.value),
            "status": self.status.value,
            "hypothesis_ok": self.hypothesis_ok,
            "hypothesis_text": self.hypothesis_text,
        }
        if self.upper is not None:
            out["upper"] = str(self.upper)
        return out


@dataclass(frozen=True)
class FormulaQuery:
    family: str
    params: Mapping[str, int] = field(default_factory=dict)

    def __getitem__(self, key):
        return self.params[key]


# -- raw values ---------------------------------------------------------------


def sauer_value(m: int, k: int) -> int:
    return sum(C(m, i) for i in range(k))


def complete_value(m: int, r: int, k: int) -> int:
    return sum(C(m, i) * (r - 1) ** (m - i) for i in range(min(k, m + 1)))


def block_value(m: int, r: int, a: int, b: int, p: int) -> int:
    t1 = sum(C(m, l) * (r - 1) ** (m - l) for l in range(min(a, m + 1)))
    t2 = sum(C(m, k) * (r - 1) ** (m - k) for k in range(min(b, m + 1)))
    t3 = sum(
        C(m, l) * C(m - l, k) * (r - 2) ** (m - l - k)
        for l in range(min(a, m + 1))
        for k in range(min(b, m - l + 1))
    )
    return t1 + t2 - t3 + (p - 1) * C(m, a) * C(m - a, b)


def i2_extremal_value(m: int, r: int) -> int:
    return _m_pow(m, r - 1, m - 1) + (r - 1) ** m


def ternary_log_slack(p: int) -> int:
    """``ceil(log2(p - 1))`` for ``p >= 2``, by bit length."""
    if p < 2:
        raise FormulaError("needs p >= 2")
    return (p - 2).bit_length()


def transfer_upper(m: int, r: int, binary_forb: Mapping[int, int] | Sequence[int] | Callable[[int], int]) -> int:
    """Sum over k of ``C(m,k) (r-2)^(m-k) forb(k, F)`` with ``forb(0, F) = 1``."""
    get = _getter(binary_forb)
    total = 0
    for k in range(m + 1):
        total += C(m, k) * (r - 2) ** (m - k) * get(k)
    return total


def transfer_lower(m: int, r: int, sizes: Mapping[int, int] | Sequence[int] | Callable[[int], int]) -> int:
    """Same sum over the sizes ``|A_k|`` of a compatible avoiding sequence."""
    return transfer_upper(m, r, sizes)


def _getter(data):
    if callable(data):
        return data
    if isinstance(data, Mapping):
        def get(k):
            try:
                return data[k]
            except KeyError:
                raise FormulaError(f"missing binary value for k={k}") from None
        return get

    def get_seq(k):
        if k >= len(data):
            raise FormulaError(f"missing binary value for k={k}")
        return data[k]
    return get_seq


def sandwich_open_3row(m: int, r: int) -> tuple[int, int]:
    """Bracket for the 3x2 configuration with columns (1,0,0), (0,1,1)."""
    lower = i2_extremal_value(m, r)
    upper = (3 * _m_pow(m, r - 1, m - 1)) // 2 + (r - 1) ** m
    return lower, upper


# -- family evaluators --------------------------------------------------------


def _need(params, *names):
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise FormulaError(f"missing parameters: {', '.join(missing)}")
    return [int(params[n]) for n in names]


def _value(value, ok, text, degraded, upper=None) -> ForbValue:
    return ForbValue(value, Status.EXACT if ok else degraded, ok, text, upper)


def _sauer(q):
    m, k = _need(q, "m", "k")
    return _value(sauer_value(m, k), True, "m >= 0 (binary)", Status.EXACT)


def _complete(q):
    m, r, k = _need(q, "m", "r", "k")
    return _value(complete_value(m, r, k), True, "r >= 2", Status.EXACT)


def _p_complete(q):
    m, r, k, p = _need(q, "m", "r", "k", "p")
    ok = _room(r - 1, m - k, p - 1)
    return _value(complete_value(m, r, k) + (p - 1) * C(m, k), ok, "(r-1)^(m-k) >= p-1", Status.UPPER)


def _complete_uniform(q):
    m, r, k, s = _need(q, "m", "r", "k", "s")
    if not 0 <= s <= k:
        raise FormulaError("needs 0 <= s <= k")
    return _value(complete_value(m, r, k), True, "s <= k", Status.EXACT)


def _p_complete_uniform(q):
    m, r, k, s, p = _need(q, "m", "r", "k", "s", "p")
    if not 0 <= s <= k:
        raise FormulaError("needs 0 <= s <= k")
    ok = _room(r - 2, m - k, p - 1)
    return _value(complete_value(m, r, k) + (p - 1) * C(m, k), ok, "(r-2)^(m-k) >= p-1", Status.UPPER)


def ternary_pkks_value(m: int, k: int, p: int) -> int:
    a = ternary_log_slack(p)
    return complete_value(m, 3, k) + (p - 1) * (C(m, k) - C(k + a - 1, k))


def _ternary_p_complete_uniform(q):
    m, k, s, p = _need(q, "m", "k", "s", "p")
    if not 0 <= s <= k:
        raise FormulaError("needs 0 <= s <= k")
    v = ternary_pkks_value(m, k, p)
    if p == 2:
        return _value(v, True, "r = 3, p = 2", Status.EXACT)
    return ForbValue(v, Status.LOWER, True, "r = 3, p >= 2 (construction bound)")


def _p_identity(q):
    m, r, k, p = _need(q, "m", "r", "k", "p")
    ok = r > 3 and _room(r - 2, m - k, p - 1)
    return _value(complete_value(m, r, k) + (p - 1) * C(m, k), ok, "r > 3 and (r-2)^(m-k) >= p-1", Status.UPPER)


def _block(q):
    m, r, a, b, p = _need(q, "m", "r", "a", "b", "p")
    if a < 0 or b < 0 or a + b < 1:
        raise FormulaError("needs a, b >= 0 and a+b >= 1")
    ok = _room(r - 2, m - a - b, p - 1)
    return _value(block_value(m, r, a, b, p), ok, "(r-2)^(m-a-b) >= p-1", Status.UPPER)


def _single_block_column(m, r, p):
    v = 2 * (r - 1) ** m - (r - 2) ** m + (p - 1) * m * (m - 1)
    ok = _room(r - 2, m - 2, p - 1)
    return _value(v, ok, "(r-2)^(m-2) >= p-1", Status.UPPER)


def _p_single_block_column(q):
    m, r, p = _need(q, "m", "r", "p")
    return _single_block_column(m, r, p)


def _two_rowed_general(q):
    m, r, a, b, c, d = _need(q, "m", "r", "a", "b", "c", "d")
    mx = max(a, b, c, d)
    if mx < 1:
        raise FormulaError("needs a+b+c+d >= 1")
    alpha = max(a, d, min(b, c))
    ok = _room(r - 2, m - 2, 2 * mx)
    text = "(r-2)^(m-2) >= 2 max{a,b,c,d}"
    if alpha > 0:
        v = i2_extremal_value(m, r) + (alpha - 1) * C(m, 2)
        return _value(v, ok, text, Status.UNVERIFIED)
    fv = _single_block_column(m, r, b + c)
    return _value(fv.value, ok and fv.hypothesis_ok, text, Status.UNVERIFIED)


def _two_rowed_r3(q):
    m, a, b, c, d = _need(q, "m", "a", "b", "c", "d")
    mx = max(a, b, c, d)
    ad = max(a, d)
    ok = ad >= 1 and ad >= min(b, c) and (m < 2 or 2 ** (m - 2) >= (mx - 1) * m * m)
    text = "max{a,d} >= max(1, min{b,c}) and 2^(m-2) >= (max{a,b,c,d}-1) m^2"
    v = i2_extremal_value(m, 3) + (ad - 1) * C(m, 2)
    return _value(v, ok, text, Status.UNVERIFIED)


def _i2_stability_bound(q):
    m, r = _need(q, "m", "r")
    return ForbValue(stability_bound_value(m, r), Status.UPPER, m >= 3, "m >= 3; applies when T_A is not transitive")


def stability_bound_value(m: int, r: int) -> int:
    if m < 3:
        raise FormulaError("stability bound needs m >= 3")
    return i2_extremal_value(m, r) - 2 * (r - 1) ** (m - 3)


def _three_i2_r3(q):
    (m,) = _need(q, "m")
    v = complete_value(m, 3, 2) + 2 * C(m, 2) - 1
    return _value(v, m >= 4, "m >= 4", Status.UNVERIFIED)


_ASSERTED_GAP = {4: 2, 5: 5}


def _p_identity_r3_asserted(q):
    m, p = _need(q, "m", "p")
    if p not in _ASSERTED_GAP:
        raise FormulaError("asserted values exist only for p in {4, 5}")
    v = complete_value(m, 3, 2) + (p - 1) * C(m, 2) - _ASSERTED_GAP[p]
    return ForbValue(v, Status.UNVERIFIED, m >= 4, "m >= 4; asserted without proof, check by solver where feasible")


def three_row_a_value(m: int, r: int) -> int:
    return _m_pow(m, r - 1, m - 1) + 2 * (r - 1) ** m - (r - 2) ** m - _m_pow(m, r - 2, m - 1)


def three_row_b_value(m: int, r: int) -> int:
    return 2 * _m_pow(m, r - 1, m - 1) + (r - 2) ** m


def _three_row_a(q):
    m, r = _need(q, "m", "r")
    return _value(three_row_a_value(m, r), m >= 3, "m >= 3", Status.LOWER)


def _three_row_b(q):
    m, r = _need(q, "m", "r")
    return _value(three_row_b_value(m, r), m >= 3, "m >= 3", Status.LOWER)


def _transfer_upper(q):
    m, r = _need(q, "m", "r")
    data = q.get("binary_forb")
    if data is None:
        raise FormulaError("missing parameters: binary_forb")
    return ForbValue(transfer_upper(m, r, data), Status.UPPER, r >= 3, "r >= 3")


def _transfer_lower(q):
    m, r = _need(q, "m", "r")
    data = q.get("sizes")
    if data is None:
        raise FormulaError("missing parameters: sizes")
    return ForbValue(transfer_lower(m, r, data), Status.LOWER, r >= 3, "r >= 3, compatible simple avoiding sequence")


def _sandwich(q):
    m, r = _need(q, "m", "r")
    lo, hi = sandwich_open_3row(m, r)
    return ForbValue(lo, Status.LOWER, True, "lower and upper bracket", upper=hi)


FAMILIES: dict[str, Callable[[Mapping], ForbValue]] = {
    "sauer": _sauer,
    "complete": _complete,
    "p_complete": _p_complete,
    "complete_uniform": _complete_uniform,
    "p_complete_uniform": _p_complete_uniform,
    "ternary_p_complete_uniform": _ternary_p_complete_uniform,
    "p_identity": _p_identity,
    "block": _block,
    "p_single_block_column": _p_single_block_column,
    "two_rowed_general": _two_rowed_general,
    "two_rowed_r3": _two_rowed_r3,
    "i2_stability_bound": _i2_stability_bound,
    "three_i2_r3": _three_i2_r3,
    "p_identity_r3_asserted": _p_identity_r3_asserted,
    "three_row_a": _three_row_a,
    "three_row_b": _three_row_b,
    "transfer_upper": _transfer_upper,
    "transfer_lower": _transfer_lower,
    "sandwich_open_3row": _sandwich,
}


def eval(q: FormulaQuery | str, **params) -> ForbValue:  # noqa: A001
    """Evaluate a family, e.g. ``eval("complete", m=3, r=3, k=2)``."""
    if isinstance(q, str):
        q = FormulaQuery(q, params)
    elif params:
        q = FormulaQuery(q.family, {**q.params, **params})
    try:
        fn = FAMILIES[q.family]
    except KeyError:
        raise FormulaError(f"unknown family {q.family!r}") from None
    p = dict(q.params)
    if p.get("m") is not None and int(p["m"]) < 0:
        raise FormulaError("m must be >= 0")
    if p.get("r") is not None and int(p["r"]) < 2:
        raise FormulaError("r must be >= 2")
    return fn(p)


evaluate = eval


def check_identities(
    ms=range(0, 9), rs=range(2, 7), ks=range(1, 5)
) -> list[str]:
    """Formula-level identities over a grid; returns a list of violations."""
    bad = []
    for m in ms:
        for r in rs:
            for k in ks:
                full = complete_value(m, r, k)
                for s in range(k + 1):
                    cu = eval("complete_uniform", m=m, r=r, k=k, s=s).value
                    if cu != full:
                        bad.append(f"complete_uniform != complete at m={m} r={r} k={k} s={s}")
                if transfer_upper(m, r, lambda j: sauer_value(j, k)) != full:
                    bad.append(f"transfer(Sauer) != complete at m={m} r={r} k={k}")
            for a in range(1, 4):
                tr = eval("two_rowed_general", m=m, r=r, a=a, b=1, c=1, d=0).value
                pc = eval("p_complete", m=m, r=r, k=2, p=a).value
                if tr != pc:
                    bad.append(f"two_rowed_general(alpha=a) != p_complete at m={m} r={r} a={a}")
            if m >= 3 and stability_bound_value(m, r) >= i2_extremal_value(m, r):
                bad.append(f"stability bound not below extremal size at m={m} r={r}")
    return bad
