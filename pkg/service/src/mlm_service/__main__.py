"""Run the scoring service: python -m mlm_service --model ... --vocab ..."""

from __future__ import annotations

import argparse

import uvicorn

from .app import create_app
from .loading import load_engine


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(
        prog="mlm-service",
        description="Serve masked-position scoring from a pretrained model.",
    )
    parser.add_argument("--model", required=True, help="checkpoint name or path")
    parser.add_argument("--vocab", required=True, help="one piece per line file")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    args = parser.parse_args(argv)

    engine = load_engine(args.model, args.vocab)
    app = create_app(engine)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")


if __name__ == "__main__":
    main()
