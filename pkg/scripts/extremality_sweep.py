"""Count extremal representations per source and prime, checked against the classification."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from _common import parse_config, write_json

from normknot import oracle
from normknot.gl2rep import is_extremal


@dataclass
class Config:
    primes: list[int] = field(default_factory=lambda: [2, 3, 5, 7, 11, 13])
    bound: int = 13
    out: str = ""


def main(cfg: Config) -> None:
    rows = []
    for p in cfg.primes:
        result = oracle.verify_extremal_classification(p, cfg.bound)
        counts: dict = defaultdict(lambda: [0, 0])
        for kind, ell, src, Hp in oracle.extremal_sources(p, cfg.bound):
            for rep in oracle.rep_classes(src, p):
                key = f"{kind}{ell}" if kind in ("C", "D") else kind
                counts[key][0] += 1
                counts[key][1] += is_extremal(rep, Hp).extremal
        rows.append({
            "p": p,
            "mismatches": len(result.mismatches),
            "classes": {k: {"reps_up_to_iso": v[0], "extremal": v[1]} for k, v in sorted(counts.items())},
        })
        ext = {k: v[1] for k, v in sorted(counts.items()) if v[1]}
        print(f"p={p:>2}: {len(result.cells)} reps checked, {len(result.mismatches)} mismatches, extremal classes {ext}")
    write_json(rows, cfg.out or None)


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
