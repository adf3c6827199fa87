"""Recursive Katetov shrinking against the brute-force oracle on seeded maps."""
import argparse
from collections import Counter
from dataclasses import dataclass

from barriers.barrier import Schreier, Uniform, to_text
from barriers.ideals import katetov_shrink_bruteforce, katetov_shrink_recursive, random_map, verify_shrink
from barriers.ramsey import NotFoundInWindow
from barriers.sets import Window

PAIRS = [(Uniform(1), Uniform(2)), (Uniform(2), Uniform(3)), (Uniform(1), Schreier(1))]


@dataclass
class Config:
    bounds: tuple = (8, 10, 12)
    seeds: int = 40


def main(cfg: Config):
    for bound in cfg.bounds:
        w = Window(bound)
        for B, C in PAIRS:
            routes, solved, valid = Counter(), 0, 0
            for spread in (False, True):
                for seed in range(cfg.seeds):
                    f = random_map(B, C, w, seed, spread)
                    try:
                        katetov_shrink_bruteforce(B, C, f, w)
                    except NotFoundInWindow:
                        continue
                    solved += 1
                    cert = katetov_shrink_recursive(B, C, f, w)
                    valid += bool(verify_shrink(cert, B, C, f))
                    routes[cert.route.split("(")[0]] += 1
            print(f"N={bound:<3} {to_text(B)} -> {to_text(C)}: {valid}/{solved} valid; routes {dict(routes)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bounds", type=int, nargs="+", default=list(Config.bounds))
    ap.add_argument("--seeds", type=int, default=Config.seeds)
    args = ap.parse_args()
    main(Config(tuple(args.bounds), args.seeds))
