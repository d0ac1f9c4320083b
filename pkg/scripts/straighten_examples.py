"""Straighten the built-in flows and write results, conjugator plots and a summary."""
import argparse
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from circleflow import serialize
from circleflow.flows import make_family
from circleflow.pac import compose, invert
from circleflow.plotting import write_svg
from circleflow.straighten import StraightenConfig, straighten


@dataclass
class Config:
    out: Path = Path("runs/straighten")
    q_max: int = 12
    tol: float = 1e-9
    plot_t: Fraction = Fraction(1, 2)


CASES = {
    "glued61": {},
    "torus": {},
    "torus_two_blocks": {"lam": (Fraction(1, 2),) * 2, "alpha": (Fraction(1, 3), Fraction(1, 7))},
    "rotation": {},
}


def run(cfg: Config):
    cfg.out.mkdir(parents=True, exist_ok=True)
    for name, kw in CASES.items():
        fam = make_family(name.split("_")[0], **kw)
        res = straighten(fam, StraightenConfig(q_max=cfg.q_max, tol=cfg.tol))
        (cfg.out / f"{name}.json").write_text(json.dumps(serialize.result_to_json(res), indent=2))
        g = compose(res.conjugator, compose(fam(cfg.plot_t), invert(res.conjugator)))
        write_svg(fam(cfg.plot_t), cfg.out / f"{name}_map.svg", f"{name} t={cfg.plot_t}")
        write_svg(g, cfg.out / f"{name}_conjugate.svg", f"{name} straightened t={cfg.plot_t}")
        print(f"{name:18s} B={[str(b) for b in res.cuts.points]} "
              f"lengths={[str(x) for x in res.domain]} orbits={res.orbits.orbits} "
              f"verified={res.verified} residual={res.report.max_residual:.1e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Config.out)
    ap.add_argument("--q-max", type=int, default=Config.q_max)
    args = ap.parse_args()
    run(Config(out=args.out, q_max=args.q_max))
