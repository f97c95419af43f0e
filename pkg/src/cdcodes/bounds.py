"""Lower bounds on A_q(n, d, k) with replayable certificates.

Every bound is returned as a :class:`BoundCertificate`: a small expression
tree whose leaves are registry values or closed-form counts (MRD sizes,
Delsarte rank counts).  ``cert.evaluate()`` recomputes the value bottom-up.

The parallel-linkage value for a split of n into a host segment h (carrying
the first base code) and the remaining segment n - h is

    A(h) * |Q_q(n - h, k, d/2)|
      + A(n - h - t) * (1 + sum_{r=d/2}^{k-d/2} A_r(Q_q(h + t, k, d/2)))

where A(.) = A_q(., d, k) is looked up in the registry.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable

from .field import prime_power
from .rankmetric import MrdCodeSpec, delsarte_rank_distribution, mrd_size

RULES = ("Registry", "LiftedMRD", "ImprovedLinkage", "ParallelLinkage", "RrmcVariant")
ORIENTATIONS = ("normal", "swapped")
REGISTRY_ENV = "CDCODES_REGISTRY"


def check_params(q: int, n: int, d: int, k: int) -> None:
    prime_power(q)
    if d <= 0 or d % 2:
        raise ValueError(f"d must be a positive even integer, got {d}")
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")


def lifted_mrd_value(q: int, n: int, d: int, k: int) -> int:
    """Size of the lifted MRD code, q^(max(n-k,k)(min(n-k,k)-d/2+1)), floored at 1."""
    exp = max(n - k, k) * (min(n - k, k) - d // 2 + 1)
    return q ** max(exp, 0)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class BoundCertificate:
    rule: str
    params: dict
    value: int
    children: list[BoundCertificate] = field(default_factory=list)
    note: str = ""

    @property
    def label(self) -> str:
        p = self.params
        if self.rule in ("Registry", "LiftedMRD") or self.rule in RULES:
            return f"A_{p['q']}({p['n']},{p['d']},{p['k']})"
        if self.rule == "MrdSize":
            return f"|Q_{p['q']}({p['m']},{p['n']},{p['d']})|"
        if self.rule == "DelsarteCount":
            return f"A_{p['r']}[Q_{p['q']}({p['m']},{p['n']},{p['d']})]"
        if self.rule == "RestrictedCount":
            return "(" + self.expression + ")"
        raise ValueError(f"unknown rule {self.rule}")

    @property
    def expression(self) -> str:
        c = [ch.label for ch in self.children]
        p = self.params
        if self.rule == "Registry":
            return str(self.value)
        if self.rule == "LiftedMRD":
            exp = max(p["n"] - p["k"], p["k"]) * (min(p["n"] - p["k"], p["k"]) - p["d"] // 2 + 1)
            return f"{p['q']}^{max(exp, 0)}"
        if self.rule in ("MrdSize", "DelsarteCount"):
            return str(self.value)
        if self.rule == "RestrictedCount":
            return " + ".join(["1"] + c)
        if self.rule == "ImprovedLinkage":
            return f"{c[0]} * {c[1]} + {c[2]}"
        if self.rule in ("ParallelLinkage", "RrmcVariant"):
            return f"{c[0]} * {c[1]} + {c[2]} * {c[3]}"
        raise ValueError(f"unknown rule {self.rule}")

    def evaluate(self) -> int:
        """Recompute the value from the leaves; registry leaves are taken as given."""
        p = self.params
        vals = [ch.evaluate() for ch in self.children]
        if self.rule == "Registry":
            return self.value
        if self.rule == "LiftedMRD":
            return lifted_mrd_value(p["q"], p["n"], p["d"], p["k"])
        if self.rule == "MrdSize":
            return mrd_size(MrdCodeSpec(p["q"], p["m"], p["n"], p["d"]))
        if self.rule == "DelsarteCount":
            return delsarte_rank_distribution(MrdCodeSpec(p["q"], p["m"], p["n"], p["d"]))[p["r"]]
        if self.rule == "RestrictedCount":
            return 1 + sum(vals)
        if self.rule == "ImprovedLinkage":
            return vals[0] * vals[1] + vals[2]
        if self.rule in ("ParallelLinkage", "RrmcVariant"):
            return vals[0] * vals[1] + vals[2] * vals[3]
        raise ValueError(f"unknown rule {self.rule}")

    def replay(self) -> bool:
        """True iff every node's stored value equals its recomputation."""
        return self.evaluate() == self.value and all(ch.replay() for ch in self.children)

    def to_dict(self) -> dict:
        out = {
            "rule": self.rule,
            "params": self.params,
            "value": str(self.value),
            "expression": self.expression,
            "children": [ch.to_dict() for ch in self.children],
        }
        if self.note:
            out["note"] = self.note
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        tags = " ".join(
            f"{k}={v}" for k, v in self.params.items() if k not in ("q", "n", "d", "k", "m", "r")
        )
        head = f"{pad}{self.label} >= {self.value}" if self.rule in RULES else f"{pad}{self.label} = {self.value}"
        detail = self.rule + (f" {tags}" if tags else "")
        if self.note:
            detail += f"; {self.note}"
        lines = [f"{head}  [{detail}]"]
        if self.rule not in ("Registry", "MrdSize", "DelsarteCount", "RestrictedCount"):
            lines.append(f"{pad}  = {self.expression}")
        lines.extend(ch.render(indent + 1) for ch in self.children)
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# registry


class KnownValueRegistry:
    """Known lower bounds on A_q(n, d, k) plus the always-available rules."""

    def __init__(self, entries: dict[tuple[int, int, int, int], tuple[int, str]] | None = None):
        self.entries: dict[tuple[int, int, int, int], tuple[int, str]] = {}
        for key, (value, source) in (entries or {}).items():
            self.add(*key, value, source)

    def add(self, q: int, n: int, d: int, k: int, value: int, source: str = "user") -> None:
        check_params(q, n, d, k)
        key = (q, n, d, k)
        if key not in self.entries or value > self.entries[key][0]:
            self.entries[key] = (int(value), source)

    def __len__(self) -> int:
        return len(self.entries)

    def copy(self) -> KnownValueRegistry:
        return KnownValueRegistry(dict(self.entries))

    def merged(self, other: KnownValueRegistry) -> KnownValueRegistry:
        out = self.copy()
        for key, (value, source) in other.entries.items():
            out.add(*key, value, source)
        return out

    @classmethod
    def from_text(cls, text: str) -> KnownValueRegistry:
        reg = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split(None, 5)
            if len(parts) < 5:
                raise ValueError(f"registry line {lineno}: expected 'q n d k value [source]'")
            try:
                q, n, d, k, value = (int(x) for x in parts[:5])
                reg.add(q, n, d, k, value, parts[5] if len(parts) > 5 else "user")
            except ValueError as exc:
                raise ValueError(f"registry line {lineno}: {exc}") from None
        return reg

    @classmethod
    def load(cls, path) -> KnownValueRegistry:
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    @classmethod
    def shipped(cls) -> KnownValueRegistry:
        text = resources.files("cdcodes").joinpath("data/registry.txt").read_text(encoding="utf-8")
        return cls.from_text(text)

    def to_text(self) -> str:
        return "".join(
            f"{q} {n} {d} {k} {v} {src}\n" for (q, n, d, k), (v, src) in sorted(self.entries.items())
        )

    def lookup(self, q: int, n: int, d: int, k: int) -> BoundCertificate:
        check_params(q, n, d, k)
        params = {"q": q, "n": n, "d": d, "k": k}
        cands: list[BoundCertificate] = []
        for kk, via in ((k, ""), (n - k, " via duality")):
            hit = self.entries.get((q, n, d, kk))
            if hit:
                cands.append(BoundCertificate("Registry", dict(params, source=hit[1] + via), hit[0]))
        if k in (0, n):
            cands.append(BoundCertificate("Registry", dict(params, source="rule:trivial-dimension"), 1))
        elif d > 2 * min(k, n - k):
            cands.append(BoundCertificate("Registry", dict(params, source="rule:distance-exceeds-2min(k,n-k)"), 1))
        for kk in (k, n - k):
            if n >= kk >= d // 2:
                cands.append(BoundCertificate("LiftedMRD", dict(params), lifted_mrd_value(q, n, d, kk),
                                              note="registry fallback"))
                break
        if not cands:
            cands.append(BoundCertificate("Registry", dict(params, source="rule:single-codeword"), 1))
        # first maximum wins: explicit entries, then rules, then the fallback
        return max(cands, key=lambda c: c.value)


_DEFAULT: KnownValueRegistry | None = None


def default_registry() -> KnownValueRegistry:
    """The shipped registry, merged with the file named by $CDCODES_REGISTRY if set."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = KnownValueRegistry.shipped()
    reg = _DEFAULT.copy()
    extra = os.environ.get(REGISTRY_ENV)
    if extra:
        reg = reg.merged(KnownValueRegistry.load(extra))
    return reg


def registry_lookup(q: int, n: int, d: int, k: int, reg: KnownValueRegistry | None = None):
    """(value, certificate) of the best known lower bound on A_q(n, d, k)."""
    cert = (reg if reg is not None else default_registry()).lookup(q, n, d, k)
    return cert.value, cert


# ---------------------------------------------------------------------------
# formulas


def _mrd_leaf(q: int, m: int, n: int, d: int) -> BoundCertificate:
    return BoundCertificate("MrdSize", {"q": q, "m": m, "n": n, "d": d}, mrd_size(MrdCodeSpec(q, m, n, d)))


def _restricted_leaf(q: int, m: int, n: int, d: int, u_max: int) -> BoundCertificate:
    """Lower bound on the largest rank-restricted code: the MRD subcode of rank <= u_max."""
    spec = MrdCodeSpec(q, m, n, d).normalized()
    dist = delsarte_rank_distribution(spec)
    children = [
        BoundCertificate("DelsarteCount", {"q": q, "m": spec.m, "n": spec.n, "d": d, "r": r}, dist[r])
        for r in range(d, min(u_max, spec.n) + 1)
    ]
    return BoundCertificate(
        "RestrictedCount",
        {"q": q, "m": spec.m, "n": spec.n, "d": d, "u_max": u_max},
        1 + sum(c.value for c in children),
        children,
        note="MRD-subcode lower bound on Lambda, not its true maximum",
    )


def bound_lifted_mrd(q: int, n: int, d: int, k: int) -> BoundCertificate:
    check_params(q, n, d, k)
    if not n >= k >= d // 2:
        raise ValueError(f"lifted MRD needs n >= k >= d/2, got n={n}, k={k}, d={d}")
    return BoundCertificate("LiftedMRD", {"q": q, "n": n, "d": d, "k": k}, lifted_mrd_value(q, n, d, k))


def bound_improved_linkage(
    q: int, n: int, d: int, k: int, m: int, reg: KnownValueRegistry | None = None
) -> BoundCertificate:
    """A(m) * |Q_q(n-m, k, d/2)| + A(n - m + k - d/2)."""
    check_params(q, n, d, k)
    reg = reg if reg is not None else default_registry()
    if not k <= m < n:
        raise ValueError(f"need k <= m < n, got m={m}")
    if d > 2 * k:
        raise ValueError("improved linkage needs d <= 2k")
    if n - m < d // 2:
        raise ValueError(f"need n - m >= d/2, got n - m = {n - m}")
    children = [
        reg.lookup(q, m, d, k),
        _mrd_leaf(q, n - m, k, d // 2),
        reg.lookup(q, n - m + k - d // 2, d, k),
    ]
    value = children[0].value * children[1].value + children[2].value
    return BoundCertificate("ImprovedLinkage", {"q": q, "n": n, "d": d, "k": k, "m": m}, value, children)


def _parallel(rule, q, n, d, k, n1, t, orientation, reg) -> BoundCertificate:
    check_params(q, n, d, k)
    reg = reg if reg is not None else default_registry()
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    if not 0 < n1 < n:
        raise ValueError(f"n1 must split n={n}, got {n1}")
    host = n1 if orientation == "normal" else n - n1
    rest = n - host
    if host < k:
        raise ValueError(f"host segment {host} shorter than k={k}")
    if t < 0 or rest - t < k:
        raise ValueError(f"t={t} outside [0, {rest - k}] for segment length {rest}")
    children = [
        reg.lookup(q, host, d, k),
        _mrd_leaf(q, rest, k, d // 2),
        reg.lookup(q, rest - t, d, k),
        _restricted_leaf(q, host + t, k, d // 2, k - d // 2),
    ]
    value = children[0].value * children[1].value + children[2].value * children[3].value
    params = {"q": q, "n": n, "d": d, "k": k, "n1": host, "n2": rest, "t": t}
    if rule == "ParallelLinkage":
        params["orientation"] = orientation
    return BoundCertificate(rule, params, value, children)


def bound_parallel(
    q: int, n: int, d: int, k: int, n1: int, t: int = 0,
    orientation: str = "normal", reg: KnownValueRegistry | None = None,
) -> BoundCertificate:
    """Parallel linkage bound for the split (n1, n - n1) with shift t.

    With ``orientation="swapped"`` the first base code sits on n - n1 instead.
    """
    if k < d:
        raise ValueError(f"parallel linkage needs k >= d (k={k}, d={d}); see bound_rrmc")
    return _parallel("ParallelLinkage", q, n, d, k, n1, t, orientation, reg)


def bound_rrmc(
    q: int, n: int, d: int, k: int, n1: int, t: int = 0, reg: KnownValueRegistry | None = None
) -> BoundCertificate:
    """Rank-restricted variant; legal for any d <= 2k.

    When k - d/2 < d/2 only the zero word survives the rank restriction and the
    second term degenerates to A(n - n1 - t).
    """
    if d > 2 * k:
        raise ValueError(f"need d <= 2k, got d={d}, k={k}")
    return _parallel("RrmcVariant", q, n, d, k, n1, t, "normal", reg)


def _candidates(q: int, n: int, d: int, k: int, reg: KnownValueRegistry) -> Iterable[tuple[tuple, BoundCertificate]]:
    # yields (tie-break key, certificate); smaller key wins among equal values
    yield (0, 0, 0, 0), reg.lookup(q, n, d, k)
    if n >= k >= d // 2:
        yield (1, 0, 0, 0), bound_lifted_mrd(q, n, d, k)
    if d > 2 * k:
        return
    for m in range(k, n):
        if n - m >= d // 2:
            yield (2, 0, m, 0), bound_improved_linkage(q, n, d, k, m, reg)
    for rule_idx, rule in ((3, "ParallelLinkage"), (4, "RrmcVariant")):
        if rule == "ParallelLinkage" and k < d:
            continue
        orientations = ORIENTATIONS if rule == "ParallelLinkage" else ("normal",)
        for n1 in range(1, n):
            for o_idx, orientation in enumerate(orientations):
                host = n1 if orientation == "normal" else n - n1
                if host < k:
                    continue
                for t in range(0, n - host - k + 1):
                    cert = _parallel(rule, q, n, d, k, n1, t, orientation, reg)
                    yield (rule_idx, t, host, o_idx), cert


def best_bound(q: int, n: int, d: int, k: int, reg: KnownValueRegistry | None = None) -> BoundCertificate:
    """Maximum over every rule and every legal (n1, t, orientation).

    Ties go to the earlier rule in RULES, then smaller t, then smaller n1
    (the segment hosting the first base code), then the normal orientation.
    """
    check_params(q, n, d, k)
    reg = reg if reg is not None else default_registry()
    best_key, best = None, None
    for key, cert in _candidates(q, n, d, k, reg):
        if best is None or cert.value > best.value or (cert.value == best.value and key < best_key):
            best_key, best = key, cert
    return best


def best_parallel(q: int, n: int, d: int, k: int, reg: KnownValueRegistry | None = None) -> BoundCertificate | None:
    """Best parallel-linkage candidate alone (None when k < d or no split is legal)."""
    check_params(q, n, d, k)
    reg = reg if reg is not None else default_registry()
    best_key, best = None, None
    for key, cert in _candidates(q, n, d, k, reg):
        if cert.rule != "ParallelLinkage":
            continue
        if best is None or cert.value > best.value or (cert.value == best.value and key < best_key):
            best_key, best = key, cert
    return best
