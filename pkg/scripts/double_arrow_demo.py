"""Synthesize double-arrow witnesses and verify them on every thinned set."""
import argparse
import time
from dataclasses import dataclass

from barriers.barrier import Schreier, Uniform, rank, to_text
from barriers.embed import (
    double_arrow_witness,
    double_arrow_witness_rank_omega,
    recheck_phase_log,
    verify_double_arrow,
)
from barriers.ordinal import OMEGA
from barriers.sets import Window

PAIRS = [
    (Schreier(1), Uniform(3)),
    (Schreier(1), Schreier(1)),
    (Schreier(2), Schreier(1)),
    (Uniform(3), Uniform(2)),
]


@dataclass
class Config:
    bound: int = 24
    steps: int = 8


def main(cfg: Config):
    w = Window(cfg.bound)
    for B, C in PAIRS:
        t = time.perf_counter()
        if rank(B) == OMEGA and C == Schreier(1) and B != C:
            wit = double_arrow_witness_rank_omega(B, w)
        else:
            wit = double_arrow_witness(B, C, steps=cfg.steps)
        v = verify_double_arrow(wit, B, C, w)
        log = recheck_phase_log(wit, B, C)
        dt = time.perf_counter() - t
        print(f"{to_text(B)} => {to_text(C)}  [{wit.kind}]")
        print(f"  breakpoints {wit.breakpoints[:12]}{' ...' if len(wit.breakpoints) > 12 else ''}")
        print(f"  verify: {v}  phase log ({len(wit.phase_log)} entries): {log}  {dt:.2f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=Config.bound)
    ap.add_argument("--steps", type=int, default=Config.steps)
    args = ap.parse_args()
    main(Config(args.bound, args.steps))
