"""Command-line front-end: gen, train, cca, eval, diag.

Exit codes: 0 success, 1 usage error, 2 data/validation error,
3 numerical failure. Every file-writing subcommand drops a JSON manifest
next to its outputs; report paths also render PNG figures alongside the
delimited output unless --no-figures is given.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .alignment import alignment_fnorm, compute_covariances, identity_alignment
from .cca import cca_fit, pseudo_pair, trace_alignment
from .errors import NumericalError, ValidationError
from .infomax import (
    amari_distance,
    mean_abs_off_diagonal,
    pearson_correlation_matrix,
    transform,
)
from .manifest import RunManifest, read_manifest
from .mapfile import load_map_pair, save_map_pair
from .retrieval import MetricsReport, RetrievalTask, evaluate
from .store import (
    DomainTag,
    EmbeddingMatrix,
    center,
    concat_embeddings,
    load_embeddings,
    save_embeddings,
)
from .synth import (
    SourceDistribution,
    generate_distractors,
    generate_views,
    make_random_mixing,
    relative_rotation,
    sample_sources,
)
from .training import TrainConfig, train


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits on its own; route everything through UsageError instead
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="crossalign", description=__doc__)
    parser.add_argument("--threads", type=int, default=0,
                        help="BLAS thread cap (0 = library default)")
    parser.add_argument("--deterministic", action="store_true",
                        help="force single-threaded (sequential) reductions")
    parser.add_argument("--quiet", action="store_true", help="suppress stdout summaries")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a paired two-view synthetic dataset")
    p.add_argument("--n", type=int, required=True, help="number of paired samples")
    p.add_argument("--d", type=int, required=True, help="latent and view dimensionality")
    p.add_argument("--noise", type=float, default=0.0, help="view noise scale")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--distractors", type=int, default=1000,
                   help="distractor rows sharing the exemplar mixing")
    p.add_argument("--dist", choices=["laplace", "uniform", "student-t"],
                   default="laplace")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--dof", type=float, default=5.0, help="student-t degrees of freedom")
    p.add_argument("--mixing-gap", type=float, default=0.25,
                   help="latent rotation angle scale separating the two mixings")
    p.add_argument("--min-sv", type=float, default=0.1,
                   help="smallest allowed mixing singular value")

    p = sub.add_parser("train", help="train the dual-domain disentanglement maps")
    p.add_argument("--synthetic", type=Path, required=True, help="AD01 features")
    p.add_argument("--exemplar", type=Path, required=True, help="AD01 features")
    p.add_argument("--lambda", dest="lam", type=float, default=0.1,
                   help="regularizer weight; 0.05-0.15 is a good range, 0 disables")
    p.add_argument("--mu", type=float, default=1.0,
                   help="entropy weight; small-magnitude (e.g. L2-normalized) "
                        "features may need values up to 1e3")
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--batch", type=int, default=1024)
    p.add_argument("--reg", choices=["cross", "self", "hshe"], default="self")
    p.add_argument("--init", choices=["identity", "rand-same", "rand-diff"],
                   default="identity")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True, help="ADHP output path")
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("cca", help="fit the paired-CCA oracle or pseudo-label baseline")
    p.add_argument("--synthetic", type=Path, required=True)
    p.add_argument("--exemplar", type=Path, required=True)
    p.add_argument("--pairs", choices=["ground-truth", "pseudo"], default="ground-truth")
    p.add_argument("--k", type=int, default=0, help="directions to keep (0 = all)")
    p.add_argument("--eps", type=float, default=-1.0,
                   help="whitening ridge (negative = trace-scaled default)")
    p.add_argument("--out", type=Path, required=True, help="ADHP output path")

    p = sub.add_parser("eval", help="retrieval evaluation over a pool")
    p.add_argument("--queries", type=Path, required=True)
    p.add_argument("--pool", type=Path, action="append", required=True,
                   help="pool AD01 file (repeat to concatenate)")
    p.add_argument("--relevance", type=Path, required=True,
                   help="text file: 'query_id: pool_id pool_id ...' per line")
    p.add_argument("--maps", type=Path, default=None,
                   help="optional ADHP maps applied before retrieval")
    p.add_argument("--k", type=str, default="1,5,10,100",
                   help="comma-separated recall cutoffs")
    p.add_argument("--report", type=Path, default=None,
                   help="report output path (JSON; CSV and figures land next to it)")
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("diag", help="diagnostics")
    dsub = p.add_subparsers(dest="subkind", required=True)

    q = dsub.add_parser("cov", help="covariance summary and alignment F-norm")
    q.add_argument("--synthetic", type=Path, required=True)
    q.add_argument("--exemplar", type=Path, required=True)
    q.add_argument("--paired", action="store_true",
                   help="row i of both files is the same item (enables Sigma12)")

    q = dsub.add_parser("corr", help="pairwise Pearson correlation matrix")
    q.add_argument("--input", type=Path, required=True)
    q.add_argument("--maps", type=Path, default=None)
    q.add_argument("--side", choices=["s", "e"], default="s",
                   help="which map/mean of the ADHP file to apply")
    q.add_argument("--out", type=Path, required=True, help="CSV output path")
    q.add_argument("--no-figures", action="store_true")

    q = dsub.add_parser("amari", help="recovery score against the true mixing")
    q.add_argument("--maps", type=Path, required=True)
    q.add_argument("--manifest", type=Path, required=True,
                   help="gen manifest holding the true mixing matrices")
    q.add_argument("--side", choices=["s", "e"], default="s")

    q = dsub.add_parser("trace", help="Tr(H_s^T Sigma12 H_e) versus Tr(Sigma12)")
    q.add_argument("--maps", type=Path, required=True)
    q.add_argument("--synthetic", type=Path, required=True)
    q.add_argument("--exemplar", type=Path, required=True)
    return parser


def _configure_threads(threads: int, deterministic: bool) -> None:
    limit = 1 if deterministic else (threads if threads > 0 else None)
    if limit is None:
        return
    try:
        from threadpoolctl import threadpool_limits

        threadpool_limits(limits=limit)
    except ImportError:
        print("warning: threadpoolctl unavailable, thread flags ignored",
              file=sys.stderr)


def _emit(args, text: str) -> None:
    if not args.quiet:
        print(text)


def _print_json(args, payload: dict) -> None:
    if not args.quiet:
        print(json.dumps(payload, indent=2, sort_keys=True))


def _cmd_gen(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.d < 1:
        raise UsageError("--d must be >= 1")
    if args.noise < 0:
        raise UsageError("--noise must be >= 0")
    if args.distractors < 0:
        raise UsageError("--distractors must be >= 0")
    if args.mixing_gap < 0:
        raise UsageError("--mixing-gap must be >= 0")
    started = time.time()
    dist = SourceDistribution(kind=args.dist.replace("-", "_"),
                              scale=args.scale, dof=args.dof)
    sources = sample_sources(args.n, args.d, dist, args.seed)
    mixing_e = make_random_mixing(args.d, args.d, args.seed + 1,
                                  min_singular_value=args.min_sv)
    mixing_s = mixing_e @ relative_rotation(args.d, args.mixing_gap, args.seed + 2)
    dataset = generate_views(sources, mixing_s, mixing_e, args.noise, args.seed + 3)

    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    written = {
        "view_s": out / "view_s.ad01",
        "view_e": out / "view_e.ad01",
        "sources": out / "sources.ad01",
    }
    save_embeddings(dataset.view_s, written["view_s"])
    save_embeddings(dataset.view_e, written["view_e"])
    save_embeddings(dataset.sources, written["sources"])
    if args.distractors > 0:
        distractors = generate_distractors(
            args.distractors, args.d, dist, mixing_e, args.seed + 4,
            noise_scale=args.noise,
        )
        written["distractors"] = out / "distractors.ad01"
        save_embeddings(distractors, written["distractors"])

    manifest = RunManifest(
        subcommand="gen",
        flags={
            "n": args.n, "d": args.d, "noise": args.noise,
            "distractors": args.distractors, "dist": args.dist,
            "scale": args.scale, "dof": args.dof,
            "mixing_gap": args.mixing_gap, "min_sv": args.min_sv,
        },
        seeds={"seed": args.seed},
        tool_version=__version__,
        extras={
            "distribution": {"kind": dist.kind, "scale": dist.scale, "dof": dist.dof},
            "mixing_s": dataset.mixing_s.tolist(),
            "mixing_e": dataset.mixing_e.tolist(),
            "domain_gap_model": "latent rotation via Cayley transform; "
                                "stand-in for an unquantified real domain gap",
        },
    )
    for path in written.values():
        manifest.add_output(path)
    manifest.duration_seconds = time.time() - started
    manifest.write(out / "manifest.json")
    _emit(args, f"wrote {len(written)} AD01 files and manifest to {out}")
    return 0


def _history_csv(history, path: Path) -> None:
    lines = ["epoch,objective,infomax_s,infomax_e,reg,logdet_s,logdet_e"]
    for r in history:
        lines.append(
            f"{r.epoch},{r.objective!r},{r.infomax_s!r},{r.infomax_e!r},"
            f"{r.reg!r},{r.logdet_s!r},{r.logdet_e!r}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _cmd_train(args) -> int:
    if args.lam < 0:
        raise UsageError("--lambda must be >= 0")
    if args.mu <= 0:
        raise UsageError("--mu must be > 0")
    if args.lr <= 0:
        raise UsageError("--lr must be > 0")
    if args.epochs < 0:
        raise UsageError("--epochs must be >= 0")
    if args.batch < 1:
        raise UsageError("--batch must be >= 1")
    started = time.time()
    synth = load_embeddings(args.synthetic, domain_tag=DomainTag.SYNTHETIC)
    exemplar = load_embeddings(args.exemplar, domain_tag=DomainTag.EXEMPLAR)
    centered_s, mean_s = center(synth)
    centered_e, mean_e = center(exemplar)
    cfg = TrainConfig(
        lam=args.lam,
        mu=args.mu,
        learning_rate=args.lr,
        epochs=args.epochs,
        batch_size=args.batch,
        reg_variant={"cross": "cross", "self": "self_orth", "hshe": "hshe"}[args.reg],
        init_mode={"identity": "identity", "rand-same": "random_same",
                   "rand-diff": "random_diff"}[args.init],
        seed=args.seed,
    )
    pair = train(centered_s, centered_e, cfg)

    trailer = {
        "kind": "infomax",
        "config": cfg.to_dict(),
        "mean_s": mean_s.tolist(),
        "mean_e": mean_e.tolist(),
        "dims": pair.dims,
        "k": pair.dims,
        "tool_version": __version__,
    }
    save_map_pair(args.out, pair.h_s, pair.h_e, trailer)
    history_csv = args.out.with_suffix(".history.csv")
    _history_csv(pair.history, history_csv)
    if not args.no_figures and pair.history:
        from .plots import save_history_curves

        save_history_curves(pair.history, args.out.with_suffix(".history.png"))

    manifest = RunManifest(
        subcommand="train",
        flags={
            "lambda": args.lam, "mu": args.mu, "lr": args.lr,
            "epochs": args.epochs, "batch": args.batch, "reg": args.reg,
            "init": args.init,
        },
        seeds={"seed": args.seed},
        tool_version=__version__,
        extras={"batch_pairing": "independent per-domain sampling (no pairing exists)"},
    )
    manifest.add_input(args.synthetic)
    manifest.add_input(args.exemplar)
    manifest.add_output(args.out)
    manifest.add_output(history_csv)
    manifest.duration_seconds = time.time() - started
    manifest.write(Path(str(args.out) + ".manifest.json"))

    if pair.history:
        last = pair.history[-1]
        _emit(args, f"trained {pair.dims}x{pair.dims} maps: "
                    f"objective {last.objective:.6f}, reg {last.reg:.6f}")
    else:
        _emit(args, f"wrote initialized {pair.dims}x{pair.dims} maps (0 epochs)")
    return 0


def _cmd_cca(args) -> int:
    started = time.time()
    synth = load_embeddings(args.synthetic, domain_tag=DomainTag.SYNTHETIC)
    exemplar = load_embeddings(args.exemplar, domain_tag=DomainTag.EXEMPLAR)
    if args.pairs == "ground-truth":
        if synth.rows != exemplar.rows:
            raise ValidationError(
                f"ground-truth pairing needs equal row counts, got "
                f"{synth.rows} and {exemplar.rows}"
            )
        pairing = identity_alignment(synth.rows)
    else:
        pairing = pseudo_pair(synth, exemplar)
    bundle = compute_covariances(synth, exemplar, pairing)
    k = args.k if args.k > 0 else bundle.dims
    if k > bundle.dims:
        raise UsageError(f"--k must be <= {bundle.dims}")
    eps = None if args.eps < 0 else args.eps
    solution = cca_fit(bundle, k, eps)

    trailer = {
        "kind": "cca",
        "pairs": args.pairs,
        "k": k,
        "eps": solution.regularization_eps,
        "correlations": solution.correlations.tolist(),
        "mean_s": bundle.mean_s.tolist(),
        "mean_e": bundle.mean_e.tolist(),
        "dims": bundle.dims,
        "tool_version": __version__,
    }
    save_map_pair(args.out, solution.h_s_star, solution.h_e_star, trailer)

    manifest = RunManifest(
        subcommand="cca",
        flags={"pairs": args.pairs, "k": k, "eps": solution.regularization_eps},
        seeds={},
        tool_version=__version__,
    )
    manifest.add_input(args.synthetic)
    manifest.add_input(args.exemplar)
    manifest.add_output(args.out)
    manifest.duration_seconds = time.time() - started
    manifest.write(Path(str(args.out) + ".manifest.json"))

    top = ", ".join(f"{c:.4f}" for c in solution.correlations[:5])
    _emit(args, f"cca fitted k={k}: leading correlations [{top}]")
    return 0


def _parse_relevance(path: Path, query_ids: list[str], pool_ids: list[str]) -> dict:
    q_index = {qid: i for i, qid in enumerate(query_ids)}
    p_index = {pid: i for i, pid in enumerate(pool_ids)}
    relevance: dict[int, set[int]] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ValidationError(f"{path}:{lineno}: expected 'query_id: pool_id ...'")
        qid, _, rest = line.partition(":")
        qid = qid.strip()
        if qid not in q_index:
            raise ValidationError(f"{path}:{lineno}: unknown query id {qid!r}")
        rel = set()
        for pid in rest.split():
            if pid not in p_index:
                raise ValidationError(f"{path}:{lineno}: unknown pool id {pid!r}")
            rel.add(p_index[pid])
        if not rel:
            raise ValidationError(f"{path}:{lineno}: empty relevant set")
        relevance[q_index[qid]] = rel
    if not relevance:
        raise ValidationError(f"{path}: no relevance entries")
    return relevance


def _apply_maps(maps_path: Path, queries: EmbeddingMatrix, pool: EmbeddingMatrix):
    mp = load_map_pair(maps_path)
    trailer = mp.trailer
    if queries.dims != mp.dims or pool.dims != mp.dims:
        raise ValidationError(
            f"maps are {mp.dims}-dimensional but queries/pool are "
            f"{queries.dims}/{pool.dims}"
        )
    mean_s = np.asarray(trailer.get("mean_s", np.zeros(mp.dims)), dtype=np.float64)
    mean_e = np.asarray(trailer.get("mean_e", np.zeros(mp.dims)), dtype=np.float64)
    q = queries.with_data(queries.data - mean_s)
    p = pool.with_data(pool.data - mean_e)
    return transform(mp.h_s, q), transform(mp.h_e, p)


def _report_outputs(report: MetricsReport, report_path: Path, figures: bool) -> list[Path]:
    written = [report_path]
    payload = report.to_dict()
    report_path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    csv_path = report_path.with_suffix(".per_query.csv")
    ks = sorted(report.recall_at_k.keys())
    header = "query_id,best_rank,average_precision," + ",".join(f"recall_at_{k}" for k in ks)
    lines = [header]
    for r in report.per_query:
        recalls = ",".join(repr(r.recalls[k]) for k in ks)
        lines.append(f"{r.query_id},{r.best_rank},{r.average_precision!r},{recalls}")
    csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(csv_path)
    if figures:
        from .plots import save_rank_histogram, save_recall_bars

        recall_png = report_path.with_suffix(".recall.png")
        ranks_png = report_path.with_suffix(".ranks.png")
        save_recall_bars(report, recall_png)
        save_rank_histogram(report, ranks_png)
        written.extend([recall_png, ranks_png])
    return written


def _cmd_eval(args) -> int:
    started = time.time()
    try:
        ks = tuple(int(tok) for tok in args.k.split(",") if tok.strip())
    except ValueError:
        raise UsageError(f"--k must be comma-separated integers, got {args.k!r}")
    if not ks or any(k < 1 for k in ks):
        raise UsageError("--k cutoffs must be positive integers")
    queries = load_embeddings(args.queries, domain_tag=DomainTag.SYNTHETIC)
    pool_parts = [
        load_embeddings(p, domain_tag=DomainTag.EXEMPLAR) for p in args.pool
    ]
    pool = pool_parts[0] if len(pool_parts) == 1 else concat_embeddings(pool_parts)
    if queries.dims != pool.dims:
        raise ValidationError(
            f"query dim {queries.dims} does not match pool dim {pool.dims}"
        )
    relevance = _parse_relevance(args.relevance, queries.row_ids(), pool.row_ids())
    if args.maps is not None:
        queries, pool = _apply_maps(args.maps, queries, pool)
    task = RetrievalTask(queries=queries, pool=pool, relevance=relevance, ks=ks)
    report = evaluate(task)

    summary = ", ".join(f"R@{k}={report.recall_at_k[k]:.4f}" for k in sorted(ks))
    _emit(args, f"{summary}, mAP={report.map_score:.4f} "
                f"({len(report.per_query)} queries, pool {pool.rows})")

    if args.report is not None:
        args.report.parent.mkdir(parents=True, exist_ok=True)
        written = _report_outputs(report, args.report, not args.no_figures)
        manifest = RunManifest(
            subcommand="eval",
            flags={"k": list(ks), "maps": str(args.maps) if args.maps else None},
            seeds={},
            tool_version=__version__,
        )
        manifest.add_input(args.queries)
        for p in args.pool:
            manifest.add_input(p)
        manifest.add_input(args.relevance)
        if args.maps is not None:
            manifest.add_input(args.maps)
        for p in written:
            manifest.add_output(p)
        manifest.duration_seconds = time.time() - started
        manifest.write(Path(str(args.report) + ".manifest.json"))
    return 0


def _cmd_diag(args) -> int:
    if args.subkind == "cov":
        synth = load_embeddings(args.synthetic, domain_tag=DomainTag.SYNTHETIC)
        exemplar = load_embeddings(args.exemplar, domain_tag=DomainTag.EXEMPLAR)
        pairing = None
        if args.paired:
            if synth.rows != exemplar.rows:
                raise ValidationError(
                    f"--paired needs equal row counts, got {synth.rows} "
                    f"and {exemplar.rows}"
                )
            pairing = identity_alignment(synth.rows)
        bundle = compute_covariances(synth, exemplar, pairing)
        eig11 = np.linalg.eigvalsh(bundle.sigma11)
        eig22 = np.linalg.eigvalsh(bundle.sigma22)
        payload = {
            "dims": bundle.dims,
            "n_synthetic": synth.rows,
            "n_exemplar": exemplar.rows,
            "n_pairs": bundle.n_pairs,
            "trace_sigma11": float(np.trace(bundle.sigma11)),
            "trace_sigma22": float(np.trace(bundle.sigma22)),
            "min_eigenvalue_sigma11": float(eig11.min()),
            "min_eigenvalue_sigma22": float(eig22.min()),
            "standardization": "per-dimension diagonal (no full whitening)",
        }
        if bundle.sigma12 is not None:
            payload["alignment_fnorm"] = alignment_fnorm(bundle)
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0

    if args.subkind == "corr":
        started = time.time()
        features = load_embeddings(args.input)
        if args.maps is not None:
            mp = load_map_pair(args.maps)
            key = "mean_s" if args.side == "s" else "mean_e"
            mean = np.asarray(mp.trailer.get(key, np.zeros(mp.dims)))
            h = mp.h_s if args.side == "s" else mp.h_e
            features = transform(h, features.with_data(features.data - mean))
        corr = pearson_correlation_matrix(features)
        lines = [",".join(repr(float(v)) for v in row) for row in corr]
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written = [args.out]
        if not args.no_figures:
            from .plots import save_correlation_heatmap

            fig_path = args.out.with_suffix(".png")
            save_correlation_heatmap(corr, fig_path)
            written.append(fig_path)
        manifest = RunManifest(
            subcommand="diag corr",
            flags={"side": args.side, "maps": str(args.maps) if args.maps else None},
            seeds={},
            tool_version=__version__,
        )
        manifest.add_input(args.input)
        if args.maps is not None:
            manifest.add_input(args.maps)
        for p in written:
            manifest.add_output(p)
        manifest.duration_seconds = time.time() - started
        manifest.write(Path(str(args.out) + ".manifest.json"))
        payload = {
            "dims": int(corr.shape[0]),
            "mean_abs_off_diagonal": mean_abs_off_diagonal(corr),
            "csv": str(args.out),
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0

    if args.subkind == "amari":
        mp = load_map_pair(args.maps)
        info = read_manifest(args.manifest)
        key = "mixing_s" if args.side == "s" else "mixing_e"
        try:
            mixing = np.asarray(info["extras"][key], dtype=np.float64)
        except KeyError:
            raise ValidationError(f"{args.manifest}: manifest has no {key!r} entry")
        h = mp.h_s if args.side == "s" else mp.h_e
        score = amari_distance(h.T, mixing)
        print(json.dumps({"side": args.side, "amari_distance": score}, sort_keys=True))
        return 0

    # trace
    mp = load_map_pair(args.maps)
    synth = load_embeddings(args.synthetic, domain_tag=DomainTag.SYNTHETIC)
    exemplar = load_embeddings(args.exemplar, domain_tag=DomainTag.EXEMPLAR)
    if synth.rows != exemplar.rows:
        raise ValidationError(
            f"trace diagnostic needs paired files with equal rows, got "
            f"{synth.rows} and {exemplar.rows}"
        )
    bundle = compute_covariances(synth, exemplar, identity_alignment(synth.rows))
    kept = trace_alignment(mp.h_s, mp.h_e, bundle.sigma12)
    payload = {
        "trace_mapped": kept,
        "trace_sigma12": float(np.trace(bundle.sigma12)),
        "difference": kept - float(np.trace(bundle.sigma12)),
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _configure_threads(args.threads, args.deterministic)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "train":
            return _cmd_train(args)
        if args.command == "cca":
            return _cmd_cca(args)
        if args.command == "eval":
            return _cmd_eval(args)
        return _cmd_diag(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
