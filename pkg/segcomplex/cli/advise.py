from __future__ import annotations

import logging

from segcomplex.advisor import fit_per_factor, recommend
from segcomplex.cli.common import add_output_options, add_study_options, load_study
from segcomplex.config import Settings
from segcomplex.errors import ValidationError
from segcomplex.fixtures import load_study_table
from segcomplex.reporting import open_output, recommendation_model
from segcomplex.schemas import RunConfig

logger = logging.getLogger(__name__)


def register(subparsers, settings: Settings) -> None:
    parser = subparsers.add_parser(
        "advise",
        help="Recommend a maximum downsampling factor and a shallow or deep network.",
    )
    add_study_options(parser)
    parser.add_argument(
        "--measure",
        choices=("DE", "MNF", "MDF", "PC"),
        default="MDF",
        help="Complexity measure driving the factor choice (default MDF).",
    )
    parser.add_argument("--degree", type=int, default=1, help="Polynomial degree of the per-factor fits.")
    parser.add_argument("--dataset", default=None, help="Take complexity values from this study dataset.")
    parser.add_argument("--value", type=float, default=None, help="Complexity value of the target data.")
    parser.add_argument("--mdf", type=float, default=None, help="Median frequency of the target data.")
    parser.add_argument(
        "--epsilon",
        type=float,
        default=settings.epsilon,
        help="Budget on predicted E (default: SEGC_EPSILON or 0.05).",
    )
    parser.add_argument(
        "--tau",
        type=float,
        default=settings.tau,
        help="MDF above which a shallow network is advised (default: SEGC_TAU or 0.05).",
    )
    add_output_options(parser, formats=False)
    parser.set_defaults(command="advise")


def run(config: RunConfig, settings: Settings) -> int:
    study = load_study(config)
    lookup = load_study_table() if config.paper_fixture else study
    row = lookup.row(config.dataset) if config.dataset else None

    value = config.value
    if value is None and config.measure == "MDF":
        value = config.mdf
    if value is None and row is not None:
        value = row.measures.get(config.measure)
    if value is None:
        raise ValidationError(f"no {config.measure} value: pass --value or --dataset")

    mdf = config.mdf
    if mdf is None and config.measure == "MDF":
        mdf = value
    if mdf is None and row is not None:
        mdf = row.measures.mdf
    if mdf is None:
        raise ValidationError("median frequency is undefined; pass --mdf or a --dataset with a defined MDF")

    fits = fit_per_factor(study, config.measure, config.degree, config.target)
    result = recommend(
        fits,
        value,
        mdf,
        measure=config.measure,
        budget=config.epsilon,
        tau=config.tau,
        target=config.target,
    )
    model = recommendation_model(result)
    with open_output(config.output, force=config.force) as stream:
        stream.write(model.model_dump_json(indent=2) + "\n")
    logger.info("Recommended factor %d, %s network", result.max_factor, result.depth_choice.value)
    return 0
