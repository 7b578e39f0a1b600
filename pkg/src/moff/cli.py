"""Command line: ``moff train | predict | evaluate``.

Any flag may also come from ``--config FILE`` holding ``key = value`` lines
(keys spelled like the flags, without dashes); command-line values win.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path
from typing import Sequence

from moff import data, metrics
from moff.pipeline import (LoadedA, LoadedB, TrainSettings, ensemble_predictions, load_system,
                           predictions, save_a, save_b, train_a, train_b)


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(f"{self.prog}: {message}")


def read_config(path: str) -> dict[str, str]:
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CliError(f"{path}: line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value file supplying defaults for any flag")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--stopwords", help="stopword file (default: bundled English list)")

    p = _Parser(prog="moff", description="Train, apply and score the offensive-comment classifiers.")
    sub = p.add_subparsers(dest="command", required=True)
    p.subcommands = sub.choices

    t = sub.add_parser("train", parents=[common], help="train System A or B")
    t.add_argument("--train", required=True, help="labeled training TSV")
    t.add_argument("--system", choices=["A", "B"], required=True)
    t.add_argument("--model", required=True, help="output model file")
    t.add_argument("--epochs", type=int, help="classifier epochs (default A=5, B=50)")
    t.add_argument("--dim", type=int, default=50, help="embedding / paragraph-vector width")
    t.add_argument("--max-len", type=int, help="System A sequence length")
    t.add_argument("--min-count", type=int, default=1)
    t.add_argument("--hidden", type=int, default=64, help="System A LSTM width")
    t.add_argument("--hidden-b", default="64,32,16", help="System B hidden widths")
    t.add_argument("--batch-size", type=int, default=32)
    t.add_argument("--lr", type=float, default=0.001)
    t.add_argument("--recurrent-dropout", type=float, default=0.2)
    t.add_argument("--pv-epochs", type=int, default=20)
    t.add_argument("--pv-window", type=int, default=5)
    t.add_argument("--pv-negative", type=int, default=5)
    t.add_argument("--infer-steps", type=int, default=50)
    t.add_argument("--test", help=argparse.SUPPRESS)

    pr = sub.add_parser("predict", parents=[common], help="write id/label/prob predictions")
    pr.add_argument("--test", required=True, help="TSV of comments to classify")
    pr.add_argument("--system", choices=["A", "B", "C"], required=True)
    pr.add_argument("--model", help="System A model (or the only model for A/B)")
    pr.add_argument("--model-b", help="System B model (required for C)")
    pr.add_argument("--out", required=True, help="predictions TSV")

    e = sub.add_parser("evaluate", parents=[common], help="score predictions against gold")
    e.add_argument("--pred", "--test", dest="pred", required=True, help="predictions TSV")
    e.add_argument("--gold", required=True, help="gold labeled TSV")
    e.add_argument("--out", help="write the unrounded report as TSV here")
    return p


def parse_args(argv: Sequence[str] | None) -> argparse.Namespace:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config")
    early = pre.parse_known_args(argv)[0]
    if early.config and early.command in parser.subcommands:
        cfg = read_config(early.config)
        sub = parser.subcommands[early.command]
        actions = {a.dest: a for a in sub._actions}
        unknown = set(cfg) - set(actions)
        if unknown:
            raise CliError(f"{early.config}: unknown keys {sorted(unknown)}")
        for key in cfg:
            actions[key].required = False
        # string defaults go through each flag's type conversion
        sub.set_defaults(**cfg)
    return parser.parse_args(argv)


def _existing(path: str | None, what: str) -> str:
    if not path:
        raise CliError(f"{what} is required")
    if not Path(path).exists():
        raise CliError(f"{what} not found: {path}")
    return path


def cmd_train(args) -> int:
    records = data.load_tsv(_existing(args.train, "training file"))
    if not records:
        raise CliError(f"{args.train}: no records")
    st = data.stats(records)
    print(f"data: {st.total} comments (OFF {st.count_off}, NOT {st.count_not})")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        data.check_reference_stats(st)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    settings = TrainSettings(
        seed=args.seed, epochs=args.epochs, dim=args.dim, max_len=args.max_len,
        min_count=args.min_count, hidden=args.hidden,
        hidden_b=tuple(int(x) for x in str(args.hidden_b).split(",")),
        batch_size=args.batch_size, lr=args.lr, recurrent_dropout=args.recurrent_dropout,
        pv_epochs=args.pv_epochs, pv_window=args.pv_window, pv_negative=args.pv_negative,
        infer_steps=args.infer_steps, stopwords=args.stopwords)
    if args.system == "A":
        model, vocab = train_a(records, settings)
        save_a(model, vocab, args.model, args.stopwords)
        print(f"vocab: {vocab.size} entries, max_len {model.cfg.max_len}")
    else:
        model, pv = train_b(records, settings)
        save_b(model, pv, args.model, args.stopwords)
        print(f"paragraph vectors: {len(pv.words)} words, loss "
              f"{pv.epoch_losses[0]:.4f} -> {pv.epoch_losses[-1]:.4f}")
    losses = model.epoch_losses
    print(f"system {args.system}: {len(losses)} epochs, final loss {losses[-1]:.4f}")
    print(f"model written to {args.model}")
    return 0


def cmd_predict(args) -> int:
    records = data.load_tsv(_existing(args.test, "input file"))
    if args.system == "C":
        a = LoadedA(_existing(args.model, "System A model (--model)"))
        b = LoadedB(_existing(args.model_b, "System B model (--model-b)"))
        preds = ensemble_predictions(a.probs(records), b.probs(records))
    else:
        path = args.model if args.system == "A" or not args.model_b else args.model_b
        model = load_system(_existing(path, f"System {args.system} model"))
        loaded = {LoadedA: "A", LoadedB: "B"}[type(model)]
        if loaded != args.system:
            raise CliError(f"{path} holds System {loaded}, not {args.system}")
        preds = predictions(model.probs(records))
    data.write_predictions(((r.id, p.label, p.prob) for r, p in zip(records, preds)), args.out)
    print(f"{len(preds)} predictions written to {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    preds = data.read_predictions(_existing(args.pred, "predictions file"))
    gold = data.load_tsv(_existing(args.gold, "gold file"))
    gold_by_id = {r.id: r.label for r in gold}
    pred_by_id = {rid: label for rid, label, _ in preds}
    if any(label is None for label in gold_by_id.values()):
        raise CliError(f"{args.gold}: gold file has unlabeled records")
    missing = sorted(set(gold_by_id) - set(pred_by_id))
    extra = sorted(set(pred_by_id) - set(gold_by_id))
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"no prediction for ids {','.join(missing)}")
        if extra:
            parts.append(f"no gold label for ids {','.join(extra)}")
        raise CliError("; ".join(parts))
    ids = [r.id for r in gold]
    cm = metrics.confusion([pred_by_id[i] for i in ids], [gold_by_id[i] for i in ids])
    rep = metrics.report(cm)
    sys.stdout.write(metrics.render_report(rep))
    if args.out:
        Path(args.out).write_text(metrics.report_tsv(rep), encoding="utf-8")
    return 0


COMMANDS = {"train": cmd_train, "predict": cmd_predict, "evaluate": cmd_evaluate}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except (CliError, ValueError, OSError, KeyError) as exc:
        msg = " ".join(str(exc).split()) or type(exc).__name__
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
