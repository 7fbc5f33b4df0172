"""Build the explicit isomorphisms between the semidirect families and record which needed a linear twist."""

from __future__ import annotations

from dataclasses import dataclass

from _common import parse_config, write_json

from normknot import oracle


@dataclass
class Config:
    max_order: int = 2000
    out: str = ""


def main(cfg: Config) -> None:
    rows = []
    for p, ell in oracle.iso_grid(cfg.max_order):
        result = oracle.verify_iso_lemmas(p, ell, cfg.max_order)
        twisted = [c.params for c in result.cells if "identity alone" in c.detail or "swapped" in c.detail]
        rows.append({
            "p": p,
            "l": ell,
            "maps": len(result.cells),
            "mismatches": [c.to_json() for c in result.mismatches],
            "needed_linear_twist": twisted,
        })
        print(f"p={p:>2} l={ell}: {len(result.cells):>3} maps, {len(result.mismatches)} mismatches, "
              f"{len(twisted)} needed a linear twist")
    write_json(rows, cfg.out or None)


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
