"""Compare the three p-part routes over every representation, line and H' with p*l bounded."""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass

from _common import parse_config, write_json

from normknot import oracle


@dataclass
class Config:
    max_degree: int = 65
    out: str = ""


def main(cfg: Config) -> None:
    summary = []
    for p, ell in oracle.route_grid(cfg.max_degree):
        start = time.perf_counter()
        result = oracle.route_agreement_sweep([(p, ell)])
        neg = sum(1 for c in result.cells if c.params.get("negative_control"))
        summary.append({
            "p": p,
            "l": ell,
            "cells": len(result.cells),
            "negative_control_cells": neg,
            "mismatches": [c.to_json() for c in result.mismatches],
            "sources": dict(Counter(c.params["source"] for c in result.cells)),
            "seconds": round(time.perf_counter() - start, 2),
        })
        print(f"p={p:>2} l={ell:>2}: {len(result.cells):>4} cells, {len(result.mismatches)} mismatches", flush=True)
    write_json(summary, cfg.out or None)


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
