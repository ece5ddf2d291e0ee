from __future__ import annotations

from pathlib import Path

from segcomplex.config import Settings
from segcomplex.raster import write_synthetic_dataset
from segcomplex.schemas import RunConfig


def register(subparsers, settings: Settings) -> None:
    parser = subparsers.add_parser(
        "synth",
        help="Write a seeded synthetic dataset (PGM images, PBM masks and manifest.json).",
    )
    parser.add_argument("--output-dir", type=Path, required=True, help="Destination directory.")
    parser.add_argument("--kind", choices=("disk", "vessels"), default="vessels", help="Mask family.")
    parser.add_argument("--count", type=int, default=4, help="Number of items (default 4).")
    parser.add_argument("--size", type=int, default=128, help="Square frame side in pixels (default 128).")
    parser.add_argument("--seed", type=int, default=0, help="Seed of the first item; item i uses seed + i.")
    parser.add_argument("--force", action="store_true", help="Overwrite an existing dataset.")
    parser.set_defaults(command="synth")


def run(config: RunConfig, settings: Settings) -> int:
    write_synthetic_dataset(
        config.output_dir,
        kind=config.kind,
        count=config.count,
        size=config.size,
        seed=config.seed,
        force=config.force,
    )
    return 0
