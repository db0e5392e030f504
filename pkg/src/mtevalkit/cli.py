"""Command-line interface.

Exit codes: 0 success, 1 usage error (bad flags, unknown subcommand),
2 data/validation error. Reports are JSON by default (`--format table`
renders aligned text where a table layout exists) and embed the effective
configuration so every number is reproducible from the report plus the
input files. Randomized subcommands take `--seed` (default 12345); no
wall-clock entropy is used anywhere.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .corpus import (
    BitextPair,
    disjointness_report,
    filter_bitext,
    load_suite,
    load_system_outputs,
    script_predicate,
)
from .errors import AlignmentError, LoadError, MtevalkitError, ValidationError
from .humaneval import (
    aggregate_system_scores,
    flag_low_agreement,
    per_item_means,
    read_judgements_tsv,
    sign_test_pairwise,
    z_normalize,
)
from .lm import NGramModel, count_ngrams, estimate_kn, fluency_compare, perplexity
from .metrics import (
    KERNEL_BACKEND,
    BleuStats,
    bleu_score,
    corpus_stats,
    delta_table,
    sentence_bleu,
    ter,
)
from .significance import (
    DEFAULT_SEED,
    GENERATOR_NAME,
    bleu_scorer,
    mean_scorer,
    paired_bootstrap,
    pearson_fisher_ci,
)
from .tables import render_table
from .tokenizer import tok13a

BLEU_CONFIG = {"tokenizer": "13a", "smoothing": "exp", "case": "mixed", "numrefs": 1}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _config(subcommand: str, **extra) -> dict:
    cfg = {"tool": "mtevalkit", "version": __version__, "subcommand": subcommand}
    cfg.update(extra)
    return cfg


def _read_lines(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            return [line.rstrip("\r\n") for line in fh]
    except OSError as exc:
        raise LoadError("cannot read %s: %s" % (path, exc)) from exc


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise LoadError("cannot read %s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise ValidationError("%s is not valid JSON: %s" % (path, exc)) from exc


def _emit(args, payload: dict, table: str | None = None) -> None:
    if getattr(args, "format", "json") == "table" and table is not None:
        text = table
    else:
        text = json.dumps(payload, indent=2, sort_keys=True)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _add_common(sub, table: bool = False):
    sub.add_argument("--out", help="write the report here instead of stdout")
    if table:
        sub.add_argument(
            "--format", choices=("json", "table"), default="json", help="report format"
        )


# --------------------------------------------------------------------------
# subcommands


def _cmd_tokenize(args) -> int:
    source = open(args.input, encoding="utf-8") if args.input else sys.stdin
    try:
        for line in source:
            print(tok13a(line.rstrip("\r\n")).joined())
    finally:
        if args.input:
            source.close()
    return 0


def _cmd_filter_bitext(args) -> int:
    src_lines = _read_lines(args.src)
    tgt_lines = _read_lines(args.tgt)
    if len(src_lines) != len(tgt_lines):
        raise AlignmentError(
            "%s has %d lines but %s has %d lines"
            % (args.src, len(src_lines), args.tgt, len(tgt_lines))
        )
    pairs = [BitextPair.from_texts(s, t) for s, t in zip(src_lines, tgt_lines)]
    predicate = None
    if args.src_script or args.tgt_script:
        if not (args.src_script and args.tgt_script):
            raise ValidationError("--src-script and --tgt-script must be given together")
        predicate = script_predicate(args.src_script, args.tgt_script)
    kept, report = filter_bitext(
        pairs, max_len=args.max_len, max_ratio=args.max_ratio, lang_predicate=predicate
    )
    if args.out_src:
        with open(args.out_src, "w", encoding="utf-8") as fh:
            fh.writelines(p.source + "\n" for p in kept)
    if args.out_tgt:
        with open(args.out_tgt, "w", encoding="utf-8") as fh:
            fh.writelines(p.target + "\n" for p in kept)
    payload = report.to_dict()
    payload["config"] = _config(
        "filter-bitext",
        max_len=args.max_len,
        max_ratio=args.max_ratio,
        ratio_direction="symmetric",
        length_tokenizer="whitespace",
        src_script=args.src_script,
        tgt_script=args.tgt_script,
    )
    _emit(args, payload)
    return 0


def _cmd_partition(args) -> int:
    suite = load_suite(args.suite)
    payload = {
        "sizes": suite.partition_sizes(),
        "roles": {p: suite.roles(p) for p in ("direct", "reverse")},
        "source_lang": suite.source_lang,
        "target_lang": suite.target_lang,
        "config": _config("partition", suite=os.path.basename(args.suite)),
    }
    _emit(args, payload)
    return 0


def _tokenized(path: str):
    return [tok13a(line) for line in _read_lines(path)]


def _cmd_bleu(args) -> int:
    hyps = _tokenized(args.hyp)
    refs = _tokenized(args.ref)
    per_item = corpus_stats(hyps, refs)
    agg = BleuStats.zero()
    for s in per_item:
        agg = agg + s
    report = bleu_score(agg)
    payload = report.to_dict()
    payload["segments"] = len(per_item)
    if args.sentence:
        payload["sentence_scores"] = [sentence_bleu(h, r).score for h, r in zip(hyps, refs)]
    payload["config"] = _config("bleu", **BLEU_CONFIG)
    if args.stats_out:
        stats_payload = {
            "metric": "bleu",
            "items": [s.to_dict() for s in per_item],
            "config": _config("bleu", **BLEU_CONFIG),
        }
        with open(args.stats_out, "w", encoding="utf-8") as fh:
            json.dump(stats_payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    _emit(args, payload)
    return 0


def _cmd_ter(args) -> int:
    hyps = _tokenized(args.hyp)
    refs = _tokenized(args.ref)
    if len(hyps) != len(refs):
        raise AlignmentError(
            "%s has %d lines but %s has %d lines"
            % (args.hyp, len(hyps), args.ref, len(refs))
        )
    reports = [ter(h, r) for h, r in zip(hyps, refs)]
    edits = sum(r.edits for r in reports)
    ref_len = sum(r.ref_len for r in reports)
    payload = {
        "edits": edits,
        "ref_len": ref_len,
        "score": edits / ref_len if ref_len else 0.0,
        "segments": len(reports),
    }
    if args.sentence:
        payload["sentence_scores"] = [r.score for r in reports]
    payload["config"] = _config(
        "ter", tokenizer="13a", shifts="greedy, span must match a reference span",
        kernel_backend=KERNEL_BACKEND,
    )
    _emit(args, payload)
    return 0


def _cmd_delta_table(args) -> int:
    raw = _read_json(args.scores)
    systems = raw.get("systems", raw)
    if not isinstance(systems, dict) or not systems:
        raise ValidationError("scores file must map system -> {fwd, rev}")
    per_system = {}
    for name, entry in systems.items():
        try:
            fwd, rev = entry["fwd"], entry["rev"]
        except (TypeError, KeyError) as exc:
            raise ValidationError("system %r needs fwd and rev scores" % name) from exc
        fwd = fwd["score"] if isinstance(fwd, dict) else float(fwd)
        rev = rev["score"] if isinstance(rev, dict) else float(rev)
        per_system[name] = (fwd, rev)
    table = delta_table(per_system)
    payload = table.to_dict()
    payload["config"] = _config("delta-table", delta="rev - fwd", sort="delta ascending")
    rendered = render_table(
        ["system", "fwd", "rev", "delta"], [row.display() for row in table.rows]
    )
    _emit(args, payload, table=rendered)
    return 0


def _cmd_lm_train(args) -> int:
    counts = count_ngrams(_read_lines(args.corpus), args.order, args.tokenization)
    model = estimate_kn(counts, unk_threshold=args.unk_threshold)
    model.save_arpa(args.model_out)
    payload = {
        "model": args.model_out,
        "order": model.order,
        "vocab_size": len(model.vocab),
        "sentences": counts.sentences,
        "ngrams": {n: sum(1 for g in model.probabilities if len(g) == n)
                   for n in range(1, model.order + 1)},
        "discounts": {n: list(d) for n, d in model.discounts.items()},
        "discount_fallbacks": model.metadata.get("discount_fallbacks", {}),
        "config": _config(
            "lm-train",
            order=args.order,
            tokenization=args.tokenization,
            unk_threshold=args.unk_threshold,
            smoothing="interpolated modified Kneser-Ney",
        ),
    }
    _emit(args, payload)
    return 0


def _cmd_lm_score(args) -> int:
    model = NGramModel.load_arpa(args.model)
    report = perplexity(model, _read_lines(args.text), tokenization=args.tokenization)
    payload = report.to_dict()
    payload["config"] = _config(
        "lm-score", model=os.path.basename(args.model), tokenization=report.tokenization
    )
    _emit(args, payload)
    return 0


def _cmd_fluency_compare(args) -> int:
    model = NGramModel.load_arpa(args.model)
    a_lines = _read_lines(args.a)
    b_lines = _read_lines(args.b)
    overlaps = {}
    if args.excluded:
        excluded = _read_lines(args.excluded)
        overlaps["a_vs_excluded"] = disjointness_report(a_lines, excluded).to_dict()
        overlaps["b_vs_excluded"] = disjointness_report(b_lines, excluded).to_dict()
        if args.lm_corpus:
            overlaps["lm_corpus_vs_excluded"] = disjointness_report(
                _read_lines(args.lm_corpus), excluded
            ).to_dict()
    report = fluency_compare(
        model, a_lines, b_lines, overlaps=overlaps, tokenization=args.tokenization
    )
    payload = report.to_dict()
    payload["config"] = _config(
        "fluency-compare",
        model=os.path.basename(args.model),
        tokenization=report.report_a.tokenization,
        tie_rel_tol=1e-9,
    )
    _emit(args, payload)
    return 0


def _cmd_disjointness(args) -> int:
    report = disjointness_report(_read_lines(args.lm_corpus), _read_lines(args.excluded))
    payload = report.to_dict()
    payload["config"] = _config(
        "disjointness", normalization="trim + squeeze whitespace, case preserved"
    )
    _emit(args, payload)
    return 0


def _cmd_da_aggregate(args) -> int:
    judgements = read_judgements_tsv(_read_lines(args.judgements))
    if not judgements:
        raise ValidationError("no judgements found in %s" % args.judgements)
    normalized = z_normalize(judgements)
    scores = aggregate_system_scores(normalized.judgements)
    agreement = flag_low_agreement(judgements)
    bleu_by_system = {}
    if args.bleu:
        bleu_by_system = {
            k: (v["score"] if isinstance(v, dict) else float(v))
            for k, v in _read_json(args.bleu).items()
        }
    payload = {
        "systems": [s.to_dict() for s in scores],
        "flagged_raters": normalized.flagged_raters,
        "low_agreement": agreement.to_dict(),
        "config": _config(
            "da-aggregate",
            normalization="per-rater z, sample std (n-1)",
            spread_rule="max - min > 30, strict",
        ),
    }
    if bleu_by_system:
        payload["bleu"] = bleu_by_system
    if args.per_item_out:
        if not args.system:
            raise ValidationError("--per-item-out requires --system")
        means = per_item_means(normalized.judgements, args.system)
        if not means:
            raise ValidationError("no judgements for system %r" % args.system)
        with open(args.per_item_out, "w", encoding="utf-8") as fh:
            json.dump(
                {"metric": "human", "system": args.system, "items": means},
                fh, indent=2, sort_keys=True,
            )
            fh.write("\n")
    rows = []
    for s in scores:
        row = [s.system_id]
        if bleu_by_system:
            row.append("%.1f" % bleu_by_system.get(s.system_id, float("nan")))
        row += ["%.3f" % s.z_score, str(s.n_items)]
        rows.append(row)
    headers = ["system"] + (["BLEU"] if bleu_by_system else []) + ["human", "items"]
    _emit(args, payload, table=render_table(headers, rows))
    return 0


def _cmd_pairwise(args) -> int:
    pref = sign_test_pairwise(args.wins_a, args.wins_b, args.draws)
    payload = pref.to_dict()
    payload["significant_at_0.05"] = pref.p_value < 0.05
    payload["config"] = _config("pairwise", test="one-sided exact binomial, draws excluded")
    _emit(args, payload)
    return 0


def _load_bootstrap_items(path: str):
    data = _read_json(path)
    if "items" not in data:
        raise ValidationError("%s has no 'items' field" % path)
    return data


def _cmd_bootstrap(args) -> int:
    data_a = _load_bootstrap_items(args.a)
    data_b = _load_bootstrap_items(args.b)
    if args.metric == "bleu":
        items_a = [BleuStats.from_dict(d) for d in data_a["items"]]
        items_b = [BleuStats.from_dict(d) for d in data_b["items"]]
        scorer = bleu_scorer
    else:
        map_a, map_b = data_a["items"], data_b["items"]
        if set(map_a) != set(map_b):
            raise AlignmentError("human stats files cover different item sets")
        keys = sorted(map_a)
        items_a = [float(map_a[k]) for k in keys]
        items_b = [float(map_b[k]) for k in keys]
        scorer = mean_scorer
    result = paired_bootstrap(
        items_a, items_b, scorer,
        n_resamples=args.n, seed=args.seed, n_threads=args.threads,
    )
    payload = result.to_dict()
    payload["metric"] = args.metric
    payload["config"] = _config(
        "bootstrap", metric=args.metric, n_resamples=args.n, seed=args.seed,
        generator=GENERATOR_NAME, p_value="one-sided, fraction of deltas <= 0",
    )
    _emit(args, payload)
    return 0


def _cmd_correlate(args) -> int:
    data = _read_json(args.pairs)
    pairs = data.get("pairs") if isinstance(data, dict) else data
    if not isinstance(pairs, list):
        raise ValidationError("%s must hold a list of [x, y] pairs" % args.pairs)
    pairs = [(float(x), float(y)) for x, y in pairs]
    r, low, high = pearson_fisher_ci(pairs, confidence=args.confidence)
    payload = {
        "r": r,
        "ci_low": low,
        "ci_high": high,
        "n": len(pairs),
        "confidence": args.confidence,
        "config": _config("correlate", interval="Fisher transform", confidence=args.confidence),
    }
    _emit(args, payload)
    return 0


_REFERENCE_ROLE = {"direct": "Ystar", "reverse": "Y"}


def _cmd_suite_eval(args) -> int:
    """Composite workflow: BLEU per partition, PPL per system, bootstrap."""
    suite = load_suite(args.suite)
    partitions = ["direct", "reverse"] if args.partition == "both" else [args.partition]
    label_a = args.name_a or os.path.basename(os.path.normpath(args.sys_a))
    label_b = args.name_b or os.path.basename(os.path.normpath(args.sys_b))

    results = {}
    outputs_all = {"a": [], "b": []}
    for partition in partitions:
        items = suite.items(partition)
        if not items:
            raise ValidationError("suite has no %s items" % partition)
        ref_role = _REFERENCE_ROLE[partition]
        refs = [tok13a(item.slots[ref_role].text) for item in items]
        item_ids = [item.item_id for item in items]
        part = {}
        per_item = {}
        for side, sysdir in (("a", args.sys_a), ("b", args.sys_b)):
            path = os.path.join(sysdir, partition + ".txt")
            outs = load_system_outputs(side, path, item_ids)
            lines = [o.hypothesis for o in outs]
            outputs_all[side].extend(lines)
            hyps = [tok13a(line) for line in lines]
            stats = corpus_stats(hyps, refs)
            per_item[side] = stats
            agg = BleuStats.zero()
            for s in stats:
                agg = agg + s
            part["bleu_" + side] = bleu_score(agg).to_dict()
        boot = paired_bootstrap(
            per_item["a"], per_item["b"], bleu_scorer,
            n_resamples=args.n, seed=args.seed, n_threads=args.threads,
        )
        part["bootstrap_a_vs_b"] = boot.to_dict()
        part["items"] = len(items)
        part["reference_role"] = ref_role
        results[partition] = part

    payload = {
        "systems": {"a": label_a, "b": label_b},
        "partitions": results,
        "config": _config(
            "suite-eval",
            seed=args.seed,
            n_resamples=args.n,
            lm_tokenization=args.tokenization,
            **BLEU_CONFIG,
        ),
    }
    if args.model:
        model = NGramModel.load_arpa(args.model)
        fluency = fluency_compare(
            model, outputs_all["a"], outputs_all["b"], tokenization=args.tokenization
        )
        payload["fluency"] = fluency.to_dict()
        payload["fluency"]["model"] = os.path.basename(args.model)

    rows = []
    for partition in partitions:
        part = results[partition]
        for side, label in (("a", label_a), ("b", label_b)):
            row = [partition, label, "%.1f" % part["bleu_" + side]["score"]]
            if args.model:
                row.append("%.1f" % payload["fluency"]["ppl_" + side])
            rows.append(row)
    headers = ["partition", "system", "BLEU"] + (["PPL"] if args.model else [])
    _emit(args, payload, table=render_table(headers, rows))
    return 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> _Parser:
    parser = _Parser(prog="mtevalkit", description=__doc__)
    parser.add_argument("--version", action="version", version="mtevalkit " + __version__)
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    p = sub.add_parser("tokenize", help="13a-tokenize stdin to stdout")
    p.add_argument("--input", help="read from this file instead of stdin")
    p.set_defaults(func=_cmd_tokenize)

    p = sub.add_parser("filter-bitext", help="apply length/ratio/language filters")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--max-len", type=int, default=250)
    p.add_argument("--max-ratio", type=float, default=1.5)
    p.add_argument("--src-script", help="expected source script, e.g. LATIN")
    p.add_argument("--tgt-script", help="expected target script, e.g. CYRILLIC")
    p.add_argument("--out-src", help="write kept source lines here")
    p.add_argument("--out-tgt", help="write kept target lines here")
    _add_common(p)
    p.set_defaults(func=_cmd_filter_bitext)

    p = sub.add_parser("partition", help="load a suite manifest and report sizes")
    p.add_argument("--suite", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_partition)

    p = sub.add_parser("bleu", help="corpus BLEU (13a, smooth.exp, case.mixed)")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--sentence", action="store_true", help="add per-sentence scores")
    p.add_argument("--stats-out", help="write per-item sufficient statistics (JSON)")
    _add_common(p)
    p.set_defaults(func=_cmd_bleu)

    p = sub.add_parser("ter", help="translation edit rate")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--sentence", action="store_true", help="add per-sentence scores")
    _add_common(p)
    p.set_defaults(func=_cmd_ter)

    p = sub.add_parser("delta-table", help="forward/reverse BLEU deltas per system")
    p.add_argument("--scores", required=True, help="JSON: system -> {fwd, rev}")
    _add_common(p, table=True)
    p.set_defaults(func=_cmd_delta_table)

    p = sub.add_parser("lm-train", help="train a Kneser-Ney n-gram model")
    p.add_argument("--corpus", required=True)
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--tokenization", choices=("whitespace", "13a"), default="whitespace")
    p.add_argument("--unk-threshold", type=int, default=2)
    p.add_argument("--out", dest="model_out", required=True, help="ARPA output path")
    p.set_defaults(func=_cmd_lm_train, out=None)

    p = sub.add_parser("lm-score", help="perplexity of a text under an ARPA model")
    p.add_argument("--model", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--tokenization", choices=("whitespace", "13a"), default="whitespace")
    _add_common(p)
    p.set_defaults(func=_cmd_lm_score)

    p = sub.add_parser("fluency-compare", help="perplexity of two outputs under one model")
    p.add_argument("--model", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--excluded", help="corpus the LM training data must be disjoint from")
    p.add_argument("--lm-corpus", help="LM training corpus, checked against --excluded")
    p.add_argument("--tokenization", choices=("whitespace", "13a"), default="whitespace")
    _add_common(p)
    p.set_defaults(func=_cmd_fluency_compare)

    p = sub.add_parser("disjointness", help="exact line overlap of two corpora")
    p.add_argument("--lm-corpus", required=True)
    p.add_argument("--excluded", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_disjointness)

    p = sub.add_parser("da-aggregate", help="z-normalize and aggregate direct assessments")
    p.add_argument("--judgements", required=True, help="TSV with header")
    p.add_argument("--bleu", help="JSON system -> BLEU score, shown side by side")
    p.add_argument("--per-item-out", help="write per-item z means for --system (JSON)")
    p.add_argument("--system", help="system id for --per-item-out")
    _add_common(p, table=True)
    p.set_defaults(func=_cmd_da_aggregate)

    p = sub.add_parser("pairwise", help="exact sign test on pairwise preferences")
    p.add_argument("--wins-a", type=int, required=True)
    p.add_argument("--wins-b", type=int, required=True)
    p.add_argument("--draws", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=_cmd_pairwise)

    p = sub.add_parser("bootstrap", help="paired bootstrap resampling")
    p.add_argument("--a", required=True, help="per-item stats file for system A")
    p.add_argument("--b", required=True, help="per-item stats file for system B")
    p.add_argument("--metric", choices=("bleu", "human"), required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=_cmd_bootstrap)

    p = sub.add_parser("correlate", help="Pearson r with Fisher confidence interval")
    p.add_argument("--pairs", required=True, help="JSON list of [x, y] pairs")
    p.add_argument("--confidence", type=float, default=0.95)
    _add_common(p)
    p.set_defaults(func=_cmd_correlate)

    p = sub.add_parser(
        "suite-eval",
        help="composite workflow: per-partition BLEU, fluency PPL, bootstrap",
    )
    p.add_argument("--suite", required=True, help="suite manifest (JSON)")
    p.add_argument("--sys-a", required=True, help="directory with <partition>.txt outputs")
    p.add_argument("--sys-b", required=True)
    p.add_argument("--model", help="ARPA model for fluency scoring")
    p.add_argument("--partition", choices=("direct", "reverse", "both"), default="both")
    p.add_argument("--name-a", help="label for system A (default: directory name)")
    p.add_argument("--name-b", help="label for system B (default: directory name)")
    p.add_argument("--n", type=int, default=1000, help="bootstrap resamples")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--tokenization", choices=("whitespace", "13a"), default="whitespace",
                   help="tokenization for LM scoring")
    _add_common(p, table=True)
    p.set_defaults(func=_cmd_suite_eval)

    return parser


def dispatch(argv: list[str]) -> int:
    """Run one subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if not hasattr(args, "func"):
        print(parser.format_usage(), file=sys.stderr, end="")
        return 1
    try:
        return args.func(args) or 0
    except MtevalkitError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
