"""Symbolic rank against brute-force truncated rank as the window grows."""
import argparse
from dataclasses import dataclass

from barriers.barrier import OMEGA_PLUS_ONE, parse_code, rank, to_text, truncated_rank
from barriers.ordinal import to_text as ord_text
from barriers.sets import Window

DEFAULT_CODES = (
    "uniform(3)",
    "schreier(1)",
    "schreier(2)",
    "glue{0: uniform(1); tail: uniformAff(0,2)}",
    to_text(OMEGA_PLUS_ONE),
)


@dataclass
class Config:
    codes: tuple = DEFAULT_CODES
    bounds: tuple = (4, 8, 12, 16, 20)


def main(cfg: Config):
    print("code".ljust(58), "rank".ljust(6), " ".join(f"N={b:<3}" for b in cfg.bounds))
    for text in cfg.codes:
        code = parse_code(text)
        trunc = [truncated_rank(code, Window(b)).finite_value() for b in cfg.bounds]
        print(text.ljust(58), ord_text(rank(code)).ljust(6), " ".join(f"{t:<5}" for t in trunc))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bounds", type=int, nargs="+", default=list(Config.bounds))
    ap.add_argument("--code", action="append", help="repeatable; default: a small corpus")
    args = ap.parse_args()
    main(Config(tuple(args.code) if args.code else DEFAULT_CODES, tuple(args.bounds)))
