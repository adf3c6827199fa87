"""Run consecutive almost-disjoint stages over a grid of sets E and check
the resulting family against both hypotheses of the sequential lemma."""
import argparse
from dataclasses import dataclass

from barriers.barrier import Uniform, parse_set
from barriers.ideals import ad_stage, katetov_shrink_recursive, random_map, verify_noCseq_hypotheses
from barriers.sets import Window

GRID = ("omega", "evens", "odds", "cof(5)", "arith(0,3)", "arith(1,3)", "arith(2,4)", "[1,4]+cof(10)")


@dataclass
class Config:
    stages: int = 10
    bound: int = 40
    depth: int = 4
    map_bound: int = 16
    seed: int = 0


def main(cfg: Config):
    B, C = Uniform(1), Uniform(2)
    grid = [parse_set(g) for g in GRID]
    w, ws = Window(cfg.bound, cfg.depth), Window(cfg.map_bound)
    fam, imgs = [], []
    for a in range(cfg.stages):
        f = random_map(B, C, ws, cfg.seed + a, spread=True)
        cert = katetov_shrink_recursive(B, C, f, ws)
        st = ad_stage(C, fam, imgs, grid[a % len(grid)], w, current=(cert, B, f))
        flags = "".join(c for c, ok, _ in st.checks if ok)
        print(f"stage {a}: E={GRID[a % len(GRID)]:<14} |A|={len(st.a_new):<3} "
              f"first={list(st.a_new[:3])} shrink={cert.route} clauses ok: {sorted(set(flags))}")
        fam.append(st.a_new)
        imgs.append((cert, cert.image(B, f)))
    print("hypotheses on the grid:", verify_noCseq_hypotheses(C, fam, w, grid))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, val in vars(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=int, default=val)
    main(Config(**vars(ap.parse_args())))
