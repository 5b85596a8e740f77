"""Command-line front end: preprocess, df, train, extract, eval, stats."""

from __future__ import annotations

import argparse
import json
import sys
from collections import defaultdict
from pathlib import Path
from typing import Sequence

from . import corpus as C
from .evaluate import (all_models_overlap, candidate_stats, corpus_stats, f_at_n, paired_ttest,
                       render_table, sample_stddev)
from .preprocess import LevelConfig, apply_level
from .rankers import (FEATURES, MODELS, SUPERVISED, RankedItem, RankedList, RankerParams,
                      build_training_rows, extract, load_model, nb_train, save_model)

DEFAULTS = {
    "level": 1, "top": 10, "lasf": 2, "alpha": 2.3, "sigma": 3.0, "damping": 0.85,
    "reduction_ratio": 0.865, "refs_stemmed": False, "seed": 0,
}
SIGNIFICANCE = 0.05


class UsageError(Exception):
    pass


# -- configuration -------------------------------------------------------------

def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Merge flags over the config file over built-in defaults."""
    merged = {k: None for k in vars(args)}
    merged.update(DEFAULTS)
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise UsageError(f"{args.config}: config must be a JSON object")
        merged.update({k.replace("-", "_"): v for k, v in cfg.items() if k not in ("func", "command")})
    merged.update({k: v for k, v in vars(args).items() if v is not None})
    ns = argparse.Namespace(**merged)
    _validate(ns)
    return ns


def _validate(ns: argparse.Namespace) -> None:
    levels = ns.level if isinstance(ns.level, list) else [ns.level]
    for lv in levels:
        if lv not in (1, 2, 3, 4):
            raise UsageError(f"--level must be 1..4, got {lv}")
    if ns.top < 1:
        raise UsageError("--top must be >= 1")
    if ns.lasf < 1:
        raise UsageError("--lasf must be >= 1")
    if ns.alpha <= 0 or ns.sigma <= 0:
        raise UsageError("--alpha and --sigma must be positive")
    if not 0 < ns.damping < 1:
        raise UsageError("--damping must be in (0, 1)")
    if not 0 < ns.reduction_ratio <= 1:
        raise UsageError("--reduction-ratio must be in (0, 1]")
    models = getattr(ns, "model", None)
    for m in models if isinstance(models, list) else [models]:
        if m is not None and m not in MODELS:
            raise UsageError(f"--model must be one of {', '.join(MODELS)}")


def _need(ns, *names):
    for name in names:
        if getattr(ns, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _level_cfg(ns, level=None) -> LevelConfig:
    return LevelConfig(level or ns.level, ns.reduction_ratio, ns.damping)


def _params(ns) -> RankerParams:
    return RankerParams(ns.lasf, ns.alpha, ns.sigma, ns.damping)


def _split_ids(ns, part: str):
    if getattr(ns, "split", None) is None:
        return None
    ids = getattr(C.load_split(ns.split), part)
    if not ids:
        raise UsageError(f"{ns.split}: {part} split is empty")
    return ids


def _load_level(ns, ids, level=None):
    cfg = _level_cfg(ns, level)
    return [apply_level(d, cfg) for d in C.load_corpus(ns.corpus, ids)]


def df_level_for(level: int) -> int:
    """Levels 3 and 4 reuse level-2 counts, which come from longer documents."""
    return min(level, 2)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- commands --------------------------------------------------------------------

def cmd_preprocess(ns) -> int:
    _need(ns, "corpus", "out")
    docs = _load_level(ns, None)
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    for doc in docs:
        C.save_document(doc, out / f"{doc.id}.L{ns.level}.json")
    _log(f"wrote {len(docs)} level-{ns.level} documents to {out}")
    return 0


def cmd_df(ns) -> int:
    _need(ns, "corpus", "split", "out")
    level = df_level_for(ns.level)
    docs = _load_level(ns, _split_ids(ns, "train"), level)
    if any(d.level > level for d in docs):
        _log(f"note: some input documents are already reduced past level {level}")
    table = C.compute_df(docs)
    C.save_df(table, ns.out)
    _log(f"wrote df table ({table.n_docs} documents, level-{level} counts) to {ns.out}")
    return 0


def cmd_train(ns) -> int:
    if ns.model is not None and ns.model not in SUPERVISED:
        raise UsageError(f"model {ns.model!r} requires no training")
    _need(ns, "model", "corpus", "refs", "split", "df")
    target = ns.model_file or ns.out
    if target is None:
        raise UsageError("--model-file is required")
    refs = C.load_references(ns.refs, stemmed=ns.refs_stemmed)
    docs = _load_level(ns, _split_ids(ns, "train"))
    rows = build_training_rows(docs, refs, ns.model, C.load_df(ns.df))
    nb = nb_train(rows, feature_names=FEATURES[ns.model])
    save_model(nb, target, {"model": ns.model, "level": ns.level})
    _log(f"trained {ns.model} on {len(rows)} candidates ({sum(r[1] for r in rows)} positive) -> {target}")
    return 0


def ranked_to_json(rl: RankedList) -> dict:
    return {"id": rl.doc_id,
            "keyphrases": [{"stem": it.stem, "surface": it.surface, "score": it.score} for it in rl.items]}


def read_ranked(path: str | Path) -> dict[str, RankedList]:
    runs = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                items = tuple(RankedItem(k["stem"], k.get("surface", k["stem"]), float(k["score"]))
                              for k in obj["keyphrases"])
                doc_id = obj["id"]
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise UsageError(f"{path}: line {lineno}: malformed ranked output ({exc})") from None
            if doc_id in runs:
                raise UsageError(f"{path}: line {lineno}: duplicate document {doc_id!r}")
            runs[doc_id] = RankedList(doc_id, items)
    return runs


def cmd_extract(ns) -> int:
    _need(ns, "model", "corpus", "out")
    df = nb = None
    if ns.model != "topicrank":
        if ns.df is None:
            raise UsageError(f"model {ns.model!r} needs a df table (--df)")
        df = C.load_df(ns.df)
    if ns.model in SUPERVISED:
        if ns.model_file is None:
            raise UsageError(f"model {ns.model!r} needs a trained model (--model-file)")
        nb, meta = load_model(ns.model_file)
        if meta.get("model", ns.model) != ns.model:
            raise UsageError(f"{ns.model_file} was trained for {meta['model']!r}, not {ns.model!r}")
    docs = _load_level(ns, _split_ids(ns, "test"))
    params = _params(ns)
    lines = [json.dumps(ranked_to_json(extract(ns.model, d, df, nb, ns.top, params)), ensure_ascii=False)
             for d in docs]
    Path(ns.out).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    _log(f"wrote {len(lines)} ranked lists to {ns.out}")
    return 0


def parse_run_label(spec: str) -> tuple[str, str, int | None, str]:
    """``MODEL@LEVEL=PATH`` or plain ``PATH`` -> (label, model, level, path)."""
    label, sep, path = spec.partition("=")
    if not sep:
        path, label = spec, Path(spec).stem
    model, at, lv = label.partition("@")
    level = int(lv) if at and lv.isdigit() else None
    return label, model, level, path


def _fmt(x: float) -> str:
    return f"{100 * x:.1f}"


def cmd_eval(ns) -> int:
    _need(ns, "refs")
    if not ns.ranked:
        raise UsageError("at least one --ranked input is required")
    refs = C.load_references(ns.refs, stemmed=ns.refs_stemmed)
    runs = {}
    for spec in ns.ranked:
        label, model, level, path = parse_run_label(spec)
        ranked = read_ranked(path)
        offenders = sorted(k for k in ranked if k not in refs)
        if offenders:
            raise UsageError(f"{path}: documents without references: {', '.join(offenders)}")
        runs[label] = (model, level, ranked, f_at_n(ranked, refs, ns.top))

    out: dict = {"top": ns.top, "runs": {}}
    rows = []
    for label, (model, level, _, rep) in runs.items():
        out["runs"][label] = {"model": model, "level": level, **rep.to_json()}
        rows.append([label, _fmt(rep.micro.precision), _fmt(rep.micro.recall), _fmt(rep.micro.f)])
    print(render_table(["run", f"P@{ns.top}", f"R@{ns.top}", f"F@{ns.top}"], rows))

    grid = {(m, lv): rep for m, lv, _, rep in runs.values() if lv is not None}
    models = sorted({m for m, _ in grid}, key=lambda m: (MODELS.index(m) if m in MODELS else 99, m))
    levels = sorted({lv for _, lv in grid})
    if len(grid) > 1:
        out.update(_level_grid(grid, models, levels, ns.top))
        overlap = {}
        for lv in levels:
            at_level = {m: ranked for m, l, ranked, _ in runs.values() if l == lv}
            if len(at_level) > 1:
                overlap[str(lv)] = all_models_overlap(at_level, refs, ns.top)
        if overlap:
            out["overlap"] = overlap
            print()
            print(render_table(["", *[f"Lvl {lv}" for lv in map(int, overlap)]],
                               [["% found by all models", *[f"{100 * v:.1f}%" for v in overlap.values()]]]))

    if ns.out:
        Path(ns.out).write_text(json.dumps(out, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return 0


def _level_grid(grid, models, levels, top) -> dict:
    """Model x level grid of F scores with sigmas and t-test markers."""
    result: dict = {"sigma1": {}, "sigma2": {}, "ttests": []}
    markers = defaultdict(str)
    for m in models:
        for i, lv in enumerate(levels):
            for base, mark in ((1, "a"), (2, "b")):
                if lv <= base or (m, base) not in grid or (m, lv) not in grid:
                    continue
                a, b = grid[(m, lv)].doc_f(), grid[(m, base)].doc_f()
                try:
                    p = paired_ttest(a, b)
                except ValueError as exc:
                    result["ttests"].append({"model": m, "level": lv, "against": base, "error": str(exc)})
                    continue
                result["ttests"].append({"model": m, "level": lv, "against": base, "p": p})
                if p < SIGNIFICANCE:
                    markers[(m, lv)] += mark
    rows = []
    for m in models:
        fs = [100 * grid[(m, lv)].micro.f for lv in levels if (m, lv) in grid]
        s2 = sample_stddev(fs) if len(fs) > 1 else None
        if s2 is not None:
            result["sigma2"][m] = s2
        cells = [f"{100 * grid[(m, lv)].micro.f:.1f}{markers[(m, lv)]}" if (m, lv) in grid else "-"
                 for lv in levels]
        rows.append([m, *cells, "" if s2 is None else f"{s2:.2f}"])
    s1_cells = []
    for lv in levels:
        fs = [100 * grid[(m, lv)].micro.f for m in models if (m, lv) in grid]
        if len(fs) > 1:
            result["sigma1"][str(lv)] = sample_stddev(fs)
            s1_cells.append(f"{result['sigma1'][str(lv)]:.2f}")
        else:
            s1_cells.append("")
    rows.append(["sigma1", *s1_cells, ""])
    print()
    print(render_table(["model", *[f"Lvl {lv}" for lv in levels], "sigma2"], rows))
    print(f"F@{top}; a/b: p < {SIGNIFICANCE} (paired t-test) against level 1/level 2")
    return result


def cmd_stats(ns) -> int:
    _need(ns, "corpus", "refs")
    refs = C.load_references(ns.refs, stemmed=ns.refs_stemmed)
    ids = _split_ids(ns, "train")
    raw = C.load_corpus(ns.corpus, ids)
    levels = ns.level if isinstance(ns.level, list) else [ns.level]
    models = ns.model if isinstance(ns.model, list) else ([ns.model] if ns.model else [])
    out: dict = {"levels": {}}
    for lv in levels:
        docs = [apply_level(d, _level_cfg(ns, lv)) for d in raw]
        st = corpus_stats(docs, refs)
        entry = {"avg_sentences": st.avg_sentences, "avg_words": st.avg_words, "max_recall": st.max_recall,
                 "models": {}}
        for m in models:
            cs = candidate_stats(m, docs, refs, ns.lasf)
            entry["models"][m] = {"avg_candidates": cs.avg_candidates, "max_recall": cs.max_recall}
        out["levels"][str(lv)] = entry

    def delta(key, i):
        if i == 0:
            return ""
        prev = out["levels"][str(levels[i - 1])][key]
        cur = out["levels"][str(levels[i])][key]
        return f" ({100 * (cur - prev) / prev:+.1f}%)" if prev else ""

    rows = [
        ["Avg. sentences", *[f"{out['levels'][str(lv)]['avg_sentences']:.0f}{delta('avg_sentences', i)}"
                             for i, lv in enumerate(levels)]],
        ["Avg. words", *[f"{out['levels'][str(lv)]['avg_words']:.0f}{delta('avg_words', i)}"
                         for i, lv in enumerate(levels)]],
        ["Max. recall", *[f"{100 * out['levels'][str(lv)]['max_recall']:.1f}%{delta('max_recall', i)}"
                          for i, lv in enumerate(levels)]],
    ]
    print(render_table(["", *[f"Lvl {lv}" for lv in levels]], rows))
    if models:
        header = ["model"]
        for lv in levels:
            header += [f"L{lv} recall", f"L{lv} #cands"]
        rows = []
        for m in models:
            row = [m]
            for lv in levels:
                ms = out["levels"][str(lv)]["models"][m]
                row += [f"{100 * ms['max_recall']:.1f}%", f"{ms['avg_candidates']:.0f}"]
            rows.append(row)
        print()
        print(render_table(header, rows))
    if ns.out:
        Path(ns.out).write_text(json.dumps(out, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return 0


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kpbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, *flags, multi_level=False, multi_model=False):
        p = sub.add_parser(name, help=help_, argument_default=None)
        p.set_defaults(func=func)
        p.add_argument("--config", help="JSON file with default option values")
        for flag in flags:
            if flag == "level":
                if multi_level:
                    p.add_argument("--level", type=int, nargs="+")
                else:
                    p.add_argument("--level", type=int, choices=(1, 2, 3, 4))
            elif flag == "model":
                if multi_model:
                    p.add_argument("--model", nargs="+", choices=MODELS)
                else:
                    p.add_argument("--model", choices=MODELS)
            elif flag in ("top", "lasf", "seed"):
                p.add_argument(f"--{flag}", type=int)
            elif flag in ("alpha", "sigma", "damping", "reduction-ratio"):
                p.add_argument(f"--{flag}", type=float)
            elif flag == "refs-stemmed":
                p.add_argument("--refs-stemmed", action="store_true", default=None,
                               help="reference phrases are already stemmed; do not restem")
            elif flag == "ranked":
                p.add_argument("--ranked", action="append",
                               help="ranked JSONL, optionally labelled MODEL@LEVEL=PATH (repeatable)")
            else:
                p.add_argument(f"--{flag}")
        return p

    add("preprocess", cmd_preprocess, "apply a preprocessing level to documents",
        "corpus", "level", "reduction-ratio", "damping", "out")
    add("df", cmd_df, "document-frequency table from the training split",
        "corpus", "split", "level", "reduction-ratio", "damping", "out")
    add("train", cmd_train, "train the naive Bayes model of a supervised ranker",
        "corpus", "refs", "refs-stemmed", "split", "level", "model", "df", "model-file", "out",
        "reduction-ratio", "damping", "seed")
    add("extract", cmd_extract, "extract ranked keyphrases for the test split",
        "corpus", "split", "level", "model", "df", "model-file", "top", "out",
        "lasf", "alpha", "sigma", "damping", "reduction-ratio", "seed")
    add("eval", cmd_eval, "score ranked keyphrases against references",
        "refs", "refs-stemmed", "ranked", "top", "out")
    add("stats", cmd_stats, "document and candidate statistics per level",
        "corpus", "refs", "refs-stemmed", "split", "level", "model", "lasf", "reduction-ratio", "damping",
        "out", multi_level=True, multi_model=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ns = resolve(args)
        return ns.func(ns)
    except (UsageError, C.CorpusFormatError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"kpbench {args.command}: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
