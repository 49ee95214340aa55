"""Train and sample the next-token models.

Reads and writes only the interchange text format and JSON configs; checking
generated samples is the evaluation toolkit's job.
"""

from __future__ import annotations

import argparse
import json
import sys

from .training import ARCHS, GenerationRun, ModelConfig, generate, train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polygen-neural", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make-config", help="write a config JSON with architecture defaults")
    p.add_argument("--arch", choices=ARCHS, default="transformer")
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="fit a model on a dataset file")
    p.add_argument("--data", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="checkpoint path")

    p = sub.add_parser("generate", help="sample from a checkpoint into a dataset file")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--num-samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--out", required=True)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "make-config":
        config = ModelConfig(arch=args.arch, epochs=args.epochs, seed=args.seed, batch_size=args.batch_size)
        config.save(args.out)
        print(json.dumps(config.as_dict(), indent=2, sort_keys=True))
        return 0
    if args.command == "train":
        payload = train(args.data, ModelConfig.load(args.config), args.out)
        print(json.dumps({"checkpoint": args.out, "final_loss": payload["loss_log"][-1]}))
        return 0
    if args.command == "generate":
        run = GenerationRun(num_samples=args.num_samples, seed=args.seed, max_len=args.max_len)
        result = generate(args.checkpoint, run, args.out)
        print(json.dumps(result))
        return 0
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
