"""Verdicts for every constructed normal-Sylow pair of the small squarefree-type degrees."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from _common import parse_config, write_json

from normknot.cli import render_table_md
from normknot.oracle import degree_table


@dataclass
class Config:
    degrees: list[int] = field(default_factory=lambda: [6, 10, 12, 14, 15, 21, 22])
    markdown: bool = True
    out: str = ""


def main(cfg: Config) -> None:
    tables = []
    for d in cfg.degrees:
        start = time.perf_counter()
        doc = degree_table(d)
        doc["seconds"] = round(time.perf_counter() - start, 2)
        tables.append(doc)
        if cfg.markdown:
            print(render_table_md(doc))
            flagged = [r for r in doc["rows"] if r["nontrivial"]]
            print(f"\n{len(doc['rows'])} classes, {len(flagged)} nontrivial, {doc['seconds']}s\n")
    if cfg.out or not cfg.markdown:
        write_json(tables, cfg.out or None)


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
