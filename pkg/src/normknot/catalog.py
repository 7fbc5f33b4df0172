"""Named transitive pairs (G, H) with a normal Sylow subgroup, and external group files.

Labels use the CLI form ``kind:key=value,...``, for example ``beta:p=5,l=3``,
``times_cyclic:base=beta(p=2;l=3),d=3`` or ``sfhf:p=5,l=3,d=2``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .gl2rep import Line, Mat2, build_rep, is_prime, semidirect_transitive
from .permgroup import (
    GroupError,
    GroupTable,
    Perm,
    coset_action,
    generate,
    group_from_json,
    identity,
    is_normal,
    is_transitive,
    orbit_and_stabilizer,
    perm_order,
    power,
    sylow,
)


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class Construction:
    label: str
    params: tuple[tuple[str, object], ...]
    G: GroupTable
    H: GroupTable

    @property
    def degree(self) -> int:
        return self.G.degree

    @property
    def pair(self) -> tuple[GroupTable, GroupTable]:
        return self.G, self.H


def _diagonal(p: int) -> Line:
    return Line(p, 1, 1)


def _check_prime(*xs: int) -> None:
    for x in xs:
        if not is_prime(x):
            raise CatalogError(f"{x} is not prime")


def alpha(p: int, ell: int, m: int) -> Construction:
    """(C_p)^2 x| C_ell with c -> diag(zeta, zeta^m), H = diagonal line."""
    _check_prime(p, ell)
    if not (2 < ell and (p - 1) % ell == 0):
        raise CatalogError(f"alpha needs 2 < ell | p-1, got p={p}, ell={ell}")
    if not 2 <= m <= ell - 1:
        raise CatalogError(f"alpha needs m in 2..ell-1, got {m}")
    if any((m * k) % ell == 1 for k in range(1, m)):
        raise CatalogError(f"m={m} is not the smaller of its inverse pair modulo {ell}")
    rep = build_rep("U", p, ell, 1, m)
    G, H = semidirect_transitive(rep, generate([], ell), _diagonal(p))
    return Construction(f"alpha(p={p},l={ell},m={m})", (("p", p), ("l", ell), ("m", m)), G, H)


def beta(p: int, ell: int) -> Construction:
    """(C_p)^2 x| C_ell acting irreducibly, H = diagonal line."""
    _check_prime(p, ell)
    if not (2 < ell and (p + 1) % ell == 0):
        raise CatalogError(f"beta needs 2 < ell | p+1, got p={p}, ell={ell}")
    rep = build_rep("V", p, ell, 1)
    G, H = semidirect_transitive(rep, generate([], ell), _diagonal(p))
    return Construction(f"beta(p={p},l={ell})", (("p", p), ("l", ell)), G, H)


def gamma(p: int, ell: int) -> Construction:
    """(C_p)^2 x| D_ell, H = diagonal line x| <tau>."""
    _check_prime(p, ell)
    if not (p >= 5 and 2 < ell and (p * p - 1) % ell == 0):
        raise CatalogError(f"gamma needs p >= 5 and 2 < ell | p^2-1, got p={p}, ell={ell}")
    rep = build_rep("W", p, ell, 1)
    tau = rep.source.generators[1]
    G, H = semidirect_transitive(rep, generate([tau], ell), _diagonal(p))
    return Construction(f"gamma(p={p},l={ell})", (("p", p), ("l", ell)), G, H)


def c4(p: int) -> Construction:
    """(C_p)^2 x| C_4 with c -> diag(-1, i), H = diagonal line; degree 4p."""
    _check_prime(p)
    if p % 4 != 1:
        raise CatalogError(f"c4 needs p = 1 mod 4, got {p}")
    rep = build_rep("U4", p, 2, 1)
    G, H = semidirect_transitive(rep, generate([], 4), _diagonal(p))
    return Construction(f"c4(p={p})", (("p", p),), G, H)


def times_cyclic(base: Construction, d: int) -> Construction:
    """G x C_d acting on (points of G) x Z/d, with H x 1 as the stabilizer of (0, 0)."""
    if d < 1:
        raise CatalogError("d must be positive")
    n = base.degree

    def lift_g(g: Perm) -> Perm:
        return tuple(g[i] + n * k for k in range(d) for i in range(n))

    shift = tuple(i + n * ((k + 1) % d) for k in range(d) for i in range(n))
    gens = [lift_g(g) for g in base.G.generators] + ([shift] if d > 1 else [])
    G = generate(gens, n * d)
    _, H = orbit_and_stabilizer(G, 0)
    return Construction(f"times_cyclic({base.label},{d})", (("base", base.label), ("d", d)), G, H)


C3_MATRIX = (0, -1, 1, -1)


def _surjection_to_c3(G: GroupTable) -> dict[Perm, int]:
    """A homomorphism G -> Z/3 factoring through G/S with S the normal Sylow subgroup of index 3."""
    for q in range(2, G.order + 1):
        if G.order % q or not is_prime(q):
            continue
        S = sylow(G, q)
        if G.order // S.order == 3 and is_normal(G, S):
            break
    else:
        raise CatalogError("base group has no normal subgroup of index 3 of the required kind")
    action = coset_action(G, S)
    Q = action.image
    if Q.order != 3:
        raise CatalogError("base group does not surject onto C3 through its Sylow quotient")
    gen = min(x for x in Q.elements if perm_order(x) == 3)
    exps = {power(gen, k): k for k in range(3)}
    return {g: exps[action.act(g)] for g in G.elements}


def semidirect_ext(base: Construction, ell: int) -> Construction:
    """(C_ell)^2 x| G with G acting through G -> C_3, c_3 -> [[0,-1],[1,-1]]; H~ = diagonal x| H."""
    _check_prime(ell)
    G0, H0 = base.pair
    chi = _surjection_to_c3(G0)
    m = Mat2(ell, *C3_MATRIX)
    mats = [Mat2.identity(ell), m, m @ m]
    n0 = G0.degree
    vectors = [(x, y) for y in range(ell) for x in range(ell)]
    total = ell * ell + n0

    def lift(shift: tuple[int, int], g: Perm) -> Perm:
        a = mats[chi[g]]
        images = [0] * total
        for v in vectors:
            w = a.apply(v)
            images[v[0] + ell * v[1]] = (w[0] + shift[0]) % ell + ell * ((w[1] + shift[1]) % ell)
        for i in range(n0):
            images[ell * ell + i] = ell * ell + g[i]
        return tuple(images)

    ident = identity(n0)
    big = generate([lift((1, 0), ident), lift((0, 1), ident)] + [lift((0, 0), g) for g in G0.generators], total)
    K = generate([lift((1, 1), ident)] + [lift((0, 0), h) for h in H0.generators], total)
    action = coset_action(big, K)
    G = action.image
    _, H = orbit_and_stabilizer(G, 0)
    return Construction(
        f"semidirect_ext({base.label},{ell})", (("base", base.label), ("l", ell)), G, H
    )


def sfhf(p: int, ell: int, d: int) -> Construction:
    """Squarefree-degree family: alpha(m = ell-1) or beta, times C_d; degree p*ell*d."""
    _check_prime(p, ell)
    if (p * p - 1) % ell or ell < 3:
        raise CatalogError(f"need an odd prime ell dividing p^2-1, got p={p}, ell={ell}")
    if (p - 1) % ell == 0:
        base = alpha(p, ell, ell - 1)
    else:
        base = beta(p, ell)
    out = times_cyclic(base, d)
    return Construction(f"sfhf(p={p},l={ell},d={d})", (("p", p), ("l", ell), ("d", d)), out.G, out.H)


# ---------------------------------------------------------------- label parsing


def _split_top(text: str) -> list[str]:
    """Split on ',' or ';' outside parentheses."""
    parts, depth, token = [], 0, ""
    for ch in text:
        depth += (ch == "(") - (ch == ")")
        if ch in ",;" and depth == 0:
            parts.append(token)
            token = ""
        else:
            token += ch
    if token.strip():
        parts.append(token)
    return [t.strip() for t in parts]


def parse_label(label: str) -> tuple[str, dict[str, str]]:
    """``kind:k=v,...`` or ``kind(k=v;...)`` -> (kind, params)."""
    label = label.strip()
    m = re.fullmatch(r"([a-z_0-9]+)\s*(?::(.*)|\((.*)\))", label, flags=re.S)
    if not m:
        raise CatalogError(f"cannot parse label {label!r}")
    body = m.group(2) if m.group(2) is not None else m.group(3)
    params: dict[str, str] = {}
    for part in _split_top(body):
        if "=" not in part:
            raise CatalogError(f"expected key=value in {label!r}, got {part!r}")
        key, value = part.split("=", 1)
        params[key.strip()] = value.strip()
    return m.group(1), params


def _int(params: dict[str, str], key: str) -> int:
    try:
        return int(params[key])
    except KeyError as exc:
        raise CatalogError(f"missing parameter {key!r}") from exc
    except ValueError as exc:
        raise CatalogError(f"parameter {key!r} must be an integer") from exc


def build(label: str) -> Construction:
    """Build from a label such as ``alpha:p=7,l=3,m=2``.

    Nested bases use the parenthesized form with ';' separators:
    ``times_cyclic:base=beta(p=2;l=3),d=3``.
    """
    kind, params = parse_label(label)
    if kind == "alpha":
        return alpha(_int(params, "p"), _int(params, "l"), _int(params, "m"))
    if kind == "beta":
        return beta(_int(params, "p"), _int(params, "l"))
    if kind == "gamma":
        return gamma(_int(params, "p"), _int(params, "l"))
    if kind == "c4":
        return c4(_int(params, "p"))
    if kind == "sfhf":
        return sfhf(_int(params, "p"), _int(params, "l"), _int(params, "d"))
    if kind in ("times_cyclic", "semidirect_ext"):
        if "base" not in params:
            raise CatalogError("missing parameter 'base'")
        base = build(params["base"])
        if kind == "times_cyclic":
            return times_cyclic(base, _int(params, "d"))
        return semidirect_ext(base, _int(params, "l"))
    raise CatalogError(f"unknown construction {kind!r}")


# ------------------------------------------------------------- external files


def load_external(path: str | Path) -> list[tuple[GroupTable, GroupTable]]:
    """Read one group object or ``{"groups": [...]}``; H is the stabilizer of ``stabilizer_point`` (1-based, default 1)."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{path}: not valid JSON ({exc})") from exc
    entries = data["groups"] if isinstance(data, dict) and "groups" in data else data
    if isinstance(entries, dict):
        entries = [entries]
    if not isinstance(entries, list):
        raise CatalogError(f"{path}: expected a group object or a list of them")
    pairs = []
    for k, obj in enumerate(entries):
        try:
            G = group_from_json(obj)
        except GroupError as exc:
            raise CatalogError(f"{path}: entry {k}: {exc}") from exc
        if not is_transitive(G):
            raise CatalogError(f"{path}: entry {k} is not transitive")
        point = int(obj.get("stabilizer_point", 1)) - 1
        _, H = orbit_and_stabilizer(G, point)
        pairs.append((G, H))
    return pairs


def external_names(path: str | Path) -> list[str]:
    data = json.loads(Path(path).read_text())
    entries = data["groups"] if isinstance(data, dict) and "groups" in data else data
    if isinstance(entries, dict):
        entries = [entries]
    return [str(obj.get("name", f"#{k + 1}")) for k, obj in enumerate(entries)]
