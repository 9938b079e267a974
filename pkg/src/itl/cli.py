"""Command-line front end.

Subcommands: train, encode, generate, divergence, eval-ll, sample-prior.
Every command validates its inputs fully before touching the filesystem.
Exit codes: 0 success, 1 validation/input error, 2 runtime or numeric
abort during work.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import estimators
from .config import STREAM_DATA, ConfigError, canonical_text, read_run_config, \
    resolve_dataset
from .data_io import IdxFormatError, write_csv_samples
from .evaluation import STREAM_EVAL, default_sigma_grid, evaluate_log_likelihood, \
    generate, latent_walk, select_sigma, split_indices
from .network import forward, load_model, save_model
from .numerics import make_rng
from .priors import PRIOR_KINDS, default_prior, sample_prior
from .trainer import STREAM_PRIOR, NonFiniteError, train


def _metrics_line(metrics) -> str:
    return json.dumps(metrics.to_dict())


def _prior_to_metadata(spec) -> dict:
    return {
        "prior": {
            "kind": spec.kind,
            "dim": spec.dim,
            "location": spec.location,
            "scale": spec.scale,
            "turns": spec.turns,
            "noise_std": spec.noise_std,
        }
    }


def _prior_from_args(args, dim: int, metadata: dict):
    """Prior for generation: CLI flags override the checkpoint's stored
    training prior, which overrides the plain default."""
    stored = metadata.get("prior")
    if stored is not None and args.prior is None and stored.get("dim") == dim:
        kind = stored["kind"]
        loc = stored["location"] if args.prior_loc is None else args.prior_loc
        scale = stored["scale"] if args.prior_scale is None else args.prior_scale
        turns = stored["turns"] if args.prior_turns is None else args.prior_turns
        noise = stored["noise_std"] if args.prior_noise is None else args.prior_noise
        return default_prior(kind, dim, location=loc, scale=scale, turns=turns,
                             noise_std=noise)
    kind = args.prior if args.prior is not None else "gaussian"
    return default_prior(
        kind, dim,
        location=0.0 if args.prior_loc is None else args.prior_loc,
        scale=args.prior_scale,
        turns=1.5 if args.prior_turns is None else args.prior_turns,
        noise_std=0.05 if args.prior_noise is None else args.prior_noise,
    )


def _add_prior_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--prior", choices=PRIOR_KINDS, default=None,
                        help="prior kind (default: the one stored in the checkpoint)")
    parser.add_argument("--prior-loc", type=float, default=None)
    parser.add_argument("--prior-scale", type=float, default=None)
    parser.add_argument("--prior-turns", type=float, default=None)
    parser.add_argument("--prior-noise", type=float, default=None)


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", required=True,
                        help="CSV path, IDX path, or a synthetic name "
                             "(ring8, two_moons, grid25)")
    parser.add_argument("--labels", default=None, help="IDX label file path")
    parser.add_argument("--data-n", type=int, default=2048,
                        help="sample count for synthetic data")
    parser.add_argument("--data-noise", type=float, default=0.25,
                        help="noise level for synthetic data")


def _parse_sigma_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(
            f"--sigma-grid must be lo:hi:num (e.g. 0.05:1.0:20), got {text!r}"
        )
    try:
        lo, hi, num = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f"--sigma-grid must be lo:hi:num with numbers, got {text!r}") from None
    return default_sigma_grid(lo, hi, num)


def _parse_walk(text: str, dim: int):
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(
            f"--walk must be START:STOP:STEPS with comma-separated coordinates "
            f"(e.g. 0,0:1,1:10), got {text!r}"
        )
    try:
        start = np.array([float(v) for v in parts[0].split(",")])
        stop = np.array([float(v) for v in parts[1].split(",")])
        steps = int(parts[2])
    except ValueError:
        raise ValueError(f"--walk endpoints must be numeric, got {text!r}") from None
    if start.shape != (dim,) or stop.shape != (dim,):
        raise ValueError(
            f"--walk endpoints must have {dim} coordinates, got "
            f"{start.shape[0]} and {stop.shape[0]}"
        )
    return start, stop, steps


def cmd_train(args) -> int:
    cfg = read_run_config(args.config)
    handle = cfg.load_dataset()
    enc_specs, dec_specs = cfg.network_specs(handle.dim)
    train_cfg = cfg.train_config()

    run_dir = cfg.run_dir()
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "config.txt").write_text(canonical_text(cfg))
    metrics_path = run_dir / "metrics.jsonl"
    metadata = _prior_to_metadata(train_cfg.prior)

    with open(metrics_path, "w", encoding="utf-8") as metrics_file:
        def on_epoch(metrics, enc, dec):
            metrics_file.write(_metrics_line(metrics) + "\n")
            metrics_file.flush()
            k = cfg.checkpoint_every
            if k > 0 and (metrics.epoch + 1) % k == 0:
                save_model(run_dir / f"checkpoint-{metrics.epoch + 1:04d}.json",
                           enc, dec, metadata)

        enc, dec, history = train(handle.data, train_cfg, enc_specs, dec_specs,
                                  epoch_callback=on_epoch)

    save_model(run_dir / "model.json", enc, dec, metadata)
    codes, _ = forward(enc, handle.data)
    write_csv_samples(codes, run_dir / "codes.csv", labels=handle.labels)
    final = history[-1]
    print(f"run dir: {run_dir}")
    print(f"final epoch {final.epoch}: recon_loss={final.recon_loss:.6g} "
          f"divergence={final.divergence:.6g} cost={final.cost:.6g}")
    return 0


def cmd_encode(args) -> int:
    enc, _, _ = load_model(args.model)
    handle = resolve_dataset(args.data, labels=args.labels, n=args.data_n,
                             noise=args.data_noise, seed=args.seed)
    if handle.dim != enc.in_dim:
        raise ValueError(
            f"data has {handle.dim} features but the encoder expects {enc.in_dim}"
        )
    codes, _ = forward(enc, handle.data)
    write_csv_samples(codes, args.out, labels=handle.labels)
    print(f"wrote {codes.shape[0]} codes to {args.out}")
    return 0


def cmd_generate(args) -> int:
    _, dec, metadata = load_model(args.model)
    if args.walk is not None:
        start, stop, steps = _parse_walk(args.walk, dec.in_dim)
        out = latent_walk(dec, start, stop, steps)
    else:
        spec = _prior_from_args(args, dec.in_dim, metadata)
        rng = make_rng(args.seed, STREAM_PRIOR)
        out = generate(dec, spec, args.n, rng)
    write_csv_samples(out, args.out)
    print(f"wrote {out.shape[0]} samples to {args.out}")
    return 0


def cmd_divergence(args) -> int:
    x = resolve_dataset(args.x).data
    y = resolve_dataset(args.y).data
    report = estimators.divergence(args.kind, x, y, args.sigma)
    doc = {"kind": args.kind, "sigma": args.sigma}
    doc.update(report.to_dict())
    print(json.dumps(doc))
    return 0


def cmd_eval_ll(args) -> int:
    _, dec, metadata = load_model(args.model)
    handle = resolve_dataset(args.data, labels=args.labels, n=args.data_n,
                             noise=args.data_noise, seed=args.seed)
    if handle.dim != dec.out_dim:
        raise ValueError(
            f"data has {handle.dim} features but the decoder produces {dec.out_dim}"
        )
    spec = _prior_from_args(args, dec.in_dim, metadata)
    grid = _parse_sigma_grid(args.sigma_grid)

    generated = generate(dec, spec, args.gen_n, make_rng(args.seed, STREAM_PRIOR))
    val_idx, test_idx = split_indices(handle.n, args.val_fraction,
                                      make_rng(args.seed, STREAM_EVAL))
    best, curve = select_sigma(handle.data[val_idx], generated, grid)
    report = evaluate_log_likelihood(handle.data[test_idx], generated, best.sigma)

    if args.curve_out is not None:
        lines = ["sigma,mean_ll"]
        lines += [f"{repr(r.sigma)},{repr(r.mean_log_likelihood)}" for r in curve]
        Path(args.curve_out).write_text("\n".join(lines) + "\n")
    print(json.dumps(report.to_dict()))
    return 0


def cmd_sample_prior(args) -> int:
    spec = default_prior(args.kind, args.dim,
                         location=args.prior_loc if args.prior_loc is not None else 0.0,
                         scale=args.prior_scale,
                         turns=args.prior_turns if args.prior_turns is not None else 1.5,
                         noise_std=args.prior_noise if args.prior_noise is not None else 0.05)
    draws = sample_prior(spec, args.n, make_rng(args.seed, STREAM_PRIOR))
    write_csv_samples(draws, args.out)
    print(f"wrote {draws.shape[0]} prior samples to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itl",
        description="Train and probe autoencoders whose latent codes match an "
                    "imposed prior; measure sample-set divergences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model from a key=value config file")
    p.add_argument("--config", required=True, help="path to the config file")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("encode", help="map a dataset to latent codes")
    p.add_argument("--model", required=True, help="checkpoint path")
    _add_data_flags(p)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("generate", help="decode prior draws (or a latent walk)")
    p.add_argument("--model", required=True, help="checkpoint path")
    p.add_argument("--n", type=int, default=100, help="number of samples")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--walk", default=None, metavar="START:STOP:STEPS",
                   help="decode a straight latent-space line instead of prior draws, "
                        "e.g. 0,0:1,1:10")
    p.add_argument("--seed", type=int, default=0)
    _add_prior_flags(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("divergence", help="divergence between two sample files")
    p.add_argument("--x", required=True, help="first CSV path")
    p.add_argument("--y", required=True, help="second CSV path")
    p.add_argument("--kind", choices=estimators.DIVERGENCE_KINDS,
                   default=estimators.EUCLIDEAN)
    p.add_argument("--sigma", type=float, required=True, help="kernel size")
    p.set_defaults(func=cmd_divergence)

    p = sub.add_parser("eval-ll", help="Parzen log-likelihood of held-out data "
                                       "under generated samples")
    p.add_argument("--model", required=True, help="checkpoint path")
    _add_data_flags(p)
    p.add_argument("--gen-n", type=int, default=10000,
                   help="number of samples to generate")
    p.add_argument("--val-fraction", type=float, default=0.2,
                   help="share of the data used to pick the kernel size")
    p.add_argument("--sigma-grid", default="0.05:1.0:20", metavar="LO:HI:NUM",
                   help="log-spaced kernel-size grid")
    p.add_argument("--curve-out", default="sigma_curve.csv",
                   help="where to write the sigma selection curve CSV")
    p.add_argument("--seed", type=int, default=0)
    _add_prior_flags(p)
    p.set_defaults(func=cmd_eval_ll)

    p = sub.add_parser("sample-prior", help="draw samples from a prior")
    p.add_argument("--kind", choices=PRIOR_KINDS, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prior-loc", type=float, default=None)
    p.add_argument("--prior-scale", type=float, default=None)
    p.add_argument("--prior-turns", type=float, default=None)
    p.add_argument("--prior-noise", type=float, default=None)
    p.set_defaults(func=cmd_sample_prior)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, IdxFormatError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NonFiniteError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
