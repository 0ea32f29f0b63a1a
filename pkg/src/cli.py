# src/cli.py
import sys
from pathlib import Path
SRC_DIR = Path(__file__).resolve().parent  # .../src
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

import argparse
import logging

from core.errors import EXIT_OK, PipelineError
from pipeline.config import load_config
from pipeline.commands import cmd_synth, cmd_extract, cmd_refine, cmd_render, cmd_eval, cmd_schedule
from isosurface.scenes import FIXTURES

DEPTH_HELP = ("Depuración de profundidad: render --depth-out escribe <prefijo>_depth_<azimut>.raw con u32 ancho, "
              "u32 alto y luego ancho·alto f32 little-endian fila a fila (+inf = sin cobertura).")

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="archivo INI de configuración (ver program/pipeline.ini)")
    common.add_argument("--out", default="out", help="directorio de salida (default: out)")
    common.add_argument("--seed", type=int, help="semilla (sobrescribe [run] seed)")
    common.add_argument("--threads", type=int, help="hilos de rasterización (sobrescribe [run] threads)")
    common.add_argument("-v", "--verbose", action="store_true", help="log en nivel DEBUG")

    p = argparse.ArgumentParser(prog="cli.py", description="Pipeline de texturizado de personajes 3D",
                                epilog=DEPTH_HELP)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", parents=[common], help="genera grid SDFG, vistas y malla de referencia")
    s.add_argument("--fixture", required=True, choices=sorted(FIXTURES))

    s = sub.add_parser("extract", parents=[common], help="malla + atlas + textura gruesa desde un grid SDFG")
    s.add_argument("--grid", required=True)

    s = sub.add_parser("refine", parents=[common], help="retroproyección de 4 vistas + Poisson blending")
    s.add_argument("--mesh", required=True)
    s.add_argument("--coarse", required=True, help="textura gruesa PNG a resolución de atlas")
    s.add_argument("--views", nargs=4, required=True, metavar="PNG",
                   help="vistas en el orden de [camera] azimuths")
    s.add_argument("--texels", help="caché TXLM producida por extract")

    s = sub.add_parser("render", parents=[common], help="render texturizado de una malla")
    s.add_argument("--mesh", required=True)
    s.add_argument("--texture", required=True)
    s.add_argument("--azimuth", type=float, default=0.0)
    s.add_argument("--elevation", type=float)
    s.add_argument("--all-views", action="store_true", help="renderiza los 4 azimuts de la configuración")
    s.add_argument("--prefix", default="render")
    s.add_argument("--depth-out", action="store_true", help="también vuelca la profundidad de cada vista (.raw)")

    s = sub.add_parser("eval", parents=[common], help="métricas entre mallas y/o conjuntos de vistas")
    s.add_argument("--mesh-a")
    s.add_argument("--mesh-b")
    s.add_argument("--views-a", nargs="+", default=[], metavar="PNG")
    s.add_argument("--views-b", nargs="+", default=[], metavar="PNG")

    s = sub.add_parser("schedule", parents=[common], help="tabla CSV del calendario de ruido")
    s.add_argument("--steps", type=int, default=1000)
    s.add_argument("--beta-start", type=float, default=0.00085)
    s.add_argument("--beta-end", type=float, default=0.012)
    s.add_argument("--no-rescale", action="store_true", help="sin reescalado a SNR terminal cero")
    return p

def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config).with_run(seed=args.seed, threads=args.threads)
        out = Path(args.out)
        if args.command == "synth":
            cmd_synth(args.fixture, cfg, out)
        elif args.command == "extract":
            cmd_extract(args.grid, cfg, out)
        elif args.command == "refine":
            cmd_refine(args.mesh, args.coarse, args.views, cfg, out, texel_cache=args.texels)
        elif args.command == "render":
            cmd_render(args.mesh, args.texture, cfg, out, azimuth_deg=args.azimuth,
                       elevation_deg=args.elevation, all_views=args.all_views, prefix=args.prefix,
                       depth_out=args.depth_out)
        elif args.command == "eval":
            cmd_eval(cfg, out, mesh_a=args.mesh_a, mesh_b=args.mesh_b,
                     views_a=args.views_a, views_b=args.views_b)
        elif args.command == "schedule":
            cmd_schedule(cfg, out, steps=args.steps, beta_start=args.beta_start,
                         beta_end=args.beta_end, rescale=not args.no_rescale)
    except PipelineError as ex:
        print(f"Error {ex}", file=sys.stderr)
        return ex.exit_code
    return EXIT_OK

if __name__ == "__main__":
    sys.exit(main())
