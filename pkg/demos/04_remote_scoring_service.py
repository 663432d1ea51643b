"""Score masked positions over HTTP against a live service instance.

Starts the scoring service in-process with a small randomly initialized
model (so the demo runs offline; the predictions themselves are
meaningless), then talks to it through the same remote backend the
denoiser uses in production.  Requires the service package:

    pip install -e service/ --no-build-isolation

Run:  python3 demos/04_remote_scoring_service.py

Against a real checkpoint you would instead launch

    python3 -m mlm_service --model /path/to/checkpoint --vocab /path/to/vocab.txt

and point the denoiser at it with --endpoint or MLM_DENOISE_ENDPOINT.
"""

import math
import tempfile
import threading
import time
from pathlib import Path

import torch
import uvicorn
from transformers import BertConfig, BertForMaskedLM

from mlm_denoise import RemoteBackend, RemoteConfig, ScoreRequest, load_vocab
from mlm_service import ScoringEngine, create_app
from mlm_service.vocab import load_piece_inventory

PIECES = (
    ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    + [f"word{i}" for i in range(24)]
    + ["##a", "##b", "##c"]
)


def start_server(app):
    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        time.sleep(0.01)
    port = server.servers[0].sockets[0].getsockname()[1]
    return server, f"http://127.0.0.1:{port}"


def main():
    vocab_path = Path(tempfile.mkdtemp(prefix="demo-vocab-")) / "vocab.txt"
    vocab_path.write_text("\n".join(PIECES) + "\n", encoding="utf-8")

    torch.manual_seed(0)
    model = BertForMaskedLM(BertConfig(
        vocab_size=len(PIECES),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
    ))
    engine = ScoringEngine(
        model=model,
        inventory=load_piece_inventory(str(vocab_path)),
        model_name="demo-random-bert",
        max_sequence_length=64,
    )
    server, endpoint = start_server(create_app(engine))
    print(f"service listening at {endpoint}")

    # The client hashes its vocabulary file; the first request only goes
    # through because the service reports the same digest.
    vocab = load_vocab(str(vocab_path))
    backend = RemoteBackend(RemoteConfig(endpoint=endpoint), vocab)
    print(f"shared vocabulary digest: {vocab.content_hash[:16]}...")
    print()

    request = ScoreRequest(
        pieces=(
            vocab.sequence_start_id,
            vocab.mask_id,
            vocab.piece_id("word3"),
            vocab.separator_id,
        ),
        mask_positions=(1,),
        top_k=5,
    )
    (predictions,) = backend.score(request)
    print("top pieces for the masked position (random weights, demo only):")
    for entry in predictions:
        piece = vocab.piece(entry.piece_id)
        print(f"  {piece:8s} log prob {entry.log_prob:7.3f} "
              f"(p={math.exp(entry.log_prob):.3f})")

    server.should_exit = True
    engine.close()


if __name__ == "__main__":
    main()
