import argparse
import json
import sys
from pathlib import Path
from typing import Any

import structlog
from pydantic import BaseModel, ValidationError

from mcwave.config.settings import Settings
from mcwave.models.bank import BankMetadata, FactorizationConfig, FilterBank
from mcwave.models.tables import TABLES
from mcwave.providers.storage import StorageProvider
from mcwave.services.comparison import compare_to_table
from mcwave.services.mcw import construct_wavelet, verify_qmf
from mcwave.services.specfactor import canonical_factor
from mcwave.services.subdivision import (
    THREE_CHANNEL_LAMBDAS,
    TWO_CHANNEL_LAMBDA,
    cascade,
    haar_symbol,
    partition_of_identity_error,
    three_channel_symbol,
    two_channel_symbol,
    wavelet_cascade,
)
from mcwave.services.transform import analyze, synthesize
from mcwave.utils.exceptions import ConfigurationError, DimensionMismatch

logger = structlog.get_logger(__name__)

EXAMPLES = ("paper-2ch", "paper-3ch", "haar")


def emit(payload: BaseModel | dict[str, Any]) -> None:
    """Write a command result as indented JSON to stdout."""
    if isinstance(payload, BaseModel):
        text = payload.model_dump_json(indent=2)
    else:
        text = json.dumps(payload, indent=2)
    sys.stdout.write(text + "\n")


def _load_bank(storage: StorageProvider, args: argparse.Namespace) -> FilterBank:
    return FilterBank(
        storage.read_mask(args.scaling),
        storage.read_mask(args.wavelet),
        BankMetadata(branch="external"),
    )


def cmd_example(args: argparse.Namespace, _cfg: Settings, storage: StorageProvider) -> int:
    lams = args.lam
    if args.name == "paper-2ch":
        if lams is not None and len(lams) != 1:
            raise DimensionMismatch("paper-2ch takes exactly one --lam value")
        used = tuple(lams) if lams else (TWO_CHANNEL_LAMBDA,)
        symbol = two_channel_symbol(used[0])
    elif args.name == "paper-3ch":
        if lams is not None and len(lams) != 3:
            raise DimensionMismatch("paper-3ch takes exactly three --lam values")
        used = tuple(lams) if lams else THREE_CHANNEL_LAMBDAS
        symbol = three_channel_symbol((used[0], used[1], used[2]))
    else:
        used = ()
        symbol = haar_symbol()

    path = storage.write_mask(
        args.output, symbol, provenance=f"example:{args.name}", lams=list(used)
    )
    logger.info("Example symbol written", name=args.name, r=symbol.rows, path=str(path))
    emit({"name": args.name, "r": symbol.rows, "lams": list(used), "path": str(path)})
    return 0


def cmd_factor(args: argparse.Namespace, cfg: Settings, storage: StorageProvider) -> int:
    symbol = storage.read_mask(args.symbol)
    fcfg = FactorizationConfig.from_settings(cfg)
    if args.bauer_n is not None:
        try:
            fcfg = FactorizationConfig.model_validate(
                {**fcfg.model_dump(), "bauer_block_count": args.bauer_n}
            )
        except ValidationError as e:
            raise ConfigurationError(
                f"Invalid --bauer-n {args.bauer_n}",
                {"errors": e.errors(include_url=False)},
            ) from e
    scaling, info = canonical_factor(symbol, fcfg, tol=cfg.tol)

    storage.write_mask(
        args.output,
        scaling,
        provenance="factor",
        normalization="A(1)=2I",
        shift=info.shift,
        zero_orders=info.zero_orders,
    )
    logger.info(
        "Canonical factor written",
        r=scaling.rows,
        rows=info.rows,
        residual=info.residual,
        path=str(args.output),
    )
    emit(info)
    return 0


def cmd_construct(args: argparse.Namespace, cfg: Settings, storage: StorageProvider) -> int:
    scaling = storage.read_mask(args.scaling)
    bank = construct_wavelet(
        scaling,
        permute=args.permute,
        cfg=FactorizationConfig.from_settings(cfg),
        tol=cfg.tol,
        n_samples=cfg.samples,
    )
    storage.write_mask(
        args.output,
        bank.wavelet,
        provenance="construct",
        branch=bank.metadata.branch,
        permutation=bank.metadata.permutation,
    )
    logger.info(
        "Wavelet symbol written",
        branch=bank.metadata.branch,
        max_residual=bank.report.max_residual if bank.report else None,
        path=str(args.output),
    )
    emit(
        {
            "metadata": bank.metadata.model_dump(),
            "report": bank.report.model_dump() if bank.report else None,
        }
    )
    return 0


def cmd_verify(args: argparse.Namespace, cfg: Settings, storage: StorageProvider) -> int:
    bank = _load_bank(storage, args)
    report = verify_qmf(bank.scaling, bank.wavelet, cfg.samples)
    emit(report)
    if report.passed(cfg.tol):
        logger.info("QMF equations verified", max_residual=report.max_residual)
        return 0
    logger.warning(
        "QMF equations violated", max_residual=report.max_residual, tol=cfg.tol
    )
    return 1


def cmd_cascade(args: argparse.Namespace, cfg: Settings, storage: StorageProvider) -> int:
    mask = storage.read_mask(args.mask)
    iters = cfg.cascade_iters if args.iters is None else args.iters
    if args.wavelet is not None:
        samples = wavelet_cascade(mask, storage.read_mask(args.wavelet), iters)
        summary: dict[str, Any] = {"kind": "wavelet"}
    else:
        samples = cascade(mask, iters)
        summary = {
            "kind": "scaling",
            "partition_of_identity_error": partition_of_identity_error(samples),
        }
    path = storage.write_cascade(args.output, samples)
    logger.info("Cascade samples written", iters=iters, rows=len(samples.values))
    emit({**summary, "iters": iters, "rows": len(samples.values), "path": str(path)})
    return 0


def cmd_analyze(args: argparse.Namespace, cfg: Settings, storage: StorageProvider) -> int:
    bank = _load_bank(storage, args)
    signal = storage.read_signal(args.signal)
    pyramid = analyze(bank, signal, args.levels, tol=cfg.tol, n_samples=cfg.samples)
    path = storage.write_pyramid(args.output, pyramid)
    logger.info(
        "Signal analyzed", length=len(signal), levels=pyramid.levels, path=str(path)
    )
    emit({"length": len(signal), "r": signal.r, "levels": pyramid.levels, "path": str(path)})
    return 0


def cmd_synthesize(args: argparse.Namespace, cfg: Settings, storage: StorageProvider) -> int:
    bank = _load_bank(storage, args)
    pyramid = storage.read_pyramid(args.pyramid)
    signal = synthesize(bank, pyramid, tol=cfg.tol, n_samples=cfg.samples)
    path = storage.write_signal(args.output, signal)
    logger.info("Signal synthesized", length=len(signal), path=str(path))
    emit({"length": len(signal), "r": signal.r, "path": str(path)})
    return 0


def cmd_compare(args: argparse.Namespace, _cfg: Settings, storage: StorageProvider) -> int:
    mask = storage.read_mask(args.mask)
    comparison = compare_to_table(mask, args.table, max_shift=args.max_shift)
    emit(comparison)
    if args.max_delta is not None and not comparison.passed(args.max_delta):
        logger.warning(
            "Table comparison exceeds tolerance",
            table=args.table,
            max_delta=comparison.max_delta,
        )
        return 1
    return 0


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return number


def add_commands(
    subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]",
    parents: list[argparse.ArgumentParser],
) -> None:
    """Register every command with its handler under ``handler``."""
    p = subparsers.add_parser(
        "example", parents=parents, help="Write an interpolatory symbol C"
    )
    p.add_argument("--name", required=True, choices=EXAMPLES)
    p.add_argument("--lam", type=float, nargs="+", help="Coupling parameters")
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(handler=cmd_example)

    p = subparsers.add_parser(
        "factor", parents=parents, help="Canonical factor A with 2C = A♯A"
    )
    p.add_argument("symbol", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--bauer-n", type=_positive_int, default=None)
    p.set_defaults(handler=cmd_factor)

    p = subparsers.add_parser(
        "construct", parents=parents, help="Wavelet symbol B for a scaling symbol A"
    )
    p.add_argument("scaling", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--permute", action="store_true", help="Normalize B's columns")
    p.set_defaults(handler=cmd_construct)

    p = subparsers.add_parser(
        "verify", parents=parents, help="Report the QMF residuals of (A, B)"
    )
    p.add_argument("scaling", type=Path)
    p.add_argument("wavelet", type=Path)
    p.set_defaults(handler=cmd_verify)

    p = subparsers.add_parser(
        "cascade", parents=parents, help="Cascade samples as CSV plot data"
    )
    p.add_argument("mask", type=Path)
    p.add_argument("--iters", type=_positive_int, default=None)
    p.add_argument("--wavelet", type=Path, default=None)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(handler=cmd_cascade)

    p = subparsers.add_parser(
        "analyze", parents=parents, help="Periodic multilevel decomposition"
    )
    p.add_argument("scaling", type=Path)
    p.add_argument("wavelet", type=Path)
    p.add_argument("signal", type=Path)
    p.add_argument("--levels", type=_positive_int, required=True)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(handler=cmd_analyze)

    p = subparsers.add_parser(
        "synthesize", parents=parents, help="Reconstruct a signal from a pyramid"
    )
    p.add_argument("scaling", type=Path)
    p.add_argument("wavelet", type=Path)
    p.add_argument("pyramid", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(handler=cmd_synthesize)

    p = subparsers.add_parser(
        "compare", parents=parents, help="Compare a mask with a reference table"
    )
    p.add_argument("mask", type=Path)
    p.add_argument("--table", required=True, choices=sorted(TABLES))
    p.add_argument("--max-shift", type=int, default=4)
    p.add_argument("--max-delta", type=float, default=None)
    p.set_defaults(handler=cmd_compare)
