"""Administrative CLI: corpus ingestion, index rebuild, serving, user management.

Exit codes: 0 success, 1 on parse/IO/domain failures, 2 on usage errors
(click's default for bad arguments or unknown subcommands).
"""

from __future__ import annotations

import os
import shutil
import socket
import sys
from pathlib import Path

import click

from .api import INDEX_FILENAME, AppConfig, create_app
from .errors import CodeLearnError
from .ingestion import ingest_intents, ingest_questions
from .providers import ProviderConfig, make_provider
from .storage import FileStorage, NamespaceDict
from .vectorstore import VectorIndex


def _fail(exc: Exception):
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


class Platform:
    """Lazily opened storage + index + provider for one data directory."""

    def __init__(self, data_dir: str):
        self.data_dir = Path(data_dir)
        self.storage = FileStorage(self.data_dir)
        self.provider = make_provider(ProviderConfig.from_env())
        self.index_path = self.data_dir / INDEX_FILENAME
        if self.index_path.exists():
            self.index = VectorIndex.load(self.index_path)
        else:
            self.index = VectorIndex(dimension=self.provider.embed_dimension)
        self.catalog = NamespaceDict(self.storage, "questions")
        self.knowledge = NamespaceDict(self.storage, "intents")

    def save_index(self):
        self.index.persist(self.index_path)

    def archive(self, kind: str, file: str) -> Path:
        corpus = self.data_dir / "corpus" / kind
        corpus.mkdir(parents=True, exist_ok=True)
        target = corpus / Path(file).name
        if Path(file).resolve() != target.resolve():
            shutil.copyfile(file, target)
        return target


@click.group()
@click.option("--data-dir", envvar="DATA_DIR", default="./data", show_default=True)
@click.pass_context
def main(ctx, data_dir):
    """Self-paced code-learning platform administration."""
    ctx.obj = data_dir


@main.group()
def ingest():
    """Ingest a corpus file into the vector index."""


@ingest.command("questions")
@click.argument("file")
@click.pass_obj
def ingest_questions_cmd(data_dir, file):
    try:
        platform = Platform(data_dir)
        count = ingest_questions(file, platform.index, platform.provider, platform.catalog)
        platform.archive("questions", file)
        platform.save_index()
    except CodeLearnError as exc:
        _fail(exc)
    click.echo(f"ingested {count} question records")


@ingest.command("intents")
@click.argument("file")
@click.pass_obj
def ingest_intents_cmd(data_dir, file):
    try:
        platform = Platform(data_dir)
        count = ingest_intents(file, platform.index, platform.provider, platform.knowledge)
        platform.archive("intents", file)
        platform.save_index()
    except CodeLearnError as exc:
        _fail(exc)
    click.echo(f"ingested {count} intent patterns")


@main.group()
def index():
    """Vector index maintenance."""


@index.command("rebuild")
@click.pass_obj
def index_rebuild(data_dir, ):
    """Re-embed every archived corpus file into a fresh index."""
    try:
        platform = Platform(data_dir)
        platform.index = VectorIndex(dimension=platform.provider.embed_dimension)
        total = 0
        for file in sorted((platform.data_dir / "corpus" / "questions").glob("*")):
            total += ingest_questions(file, platform.index, platform.provider, platform.catalog)
        for file in sorted((platform.data_dir / "corpus" / "intents").glob("*")):
            total += ingest_intents(file, platform.index, platform.provider, platform.knowledge)
        platform.save_index()
    except CodeLearnError as exc:
        _fail(exc)
    click.echo(f"rebuilt index with {len(platform.index)} chunks from {total} records")


@main.command("serve")
@click.option("--port", type=int, default=lambda: int(os.environ.get("PORT", 8000)))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.pass_obj
def serve(data_dir, port, host):
    """Run the HTTP service (port 0 binds an ephemeral port and prints it)."""
    import uvicorn

    app = create_app(AppConfig(data_dir=data_dir, provider=ProviderConfig.from_env()))
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((host, port))
    click.echo(f"listening on {host}:{sock.getsockname()[1]}")
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    server.run(sockets=[sock])


@main.group()
def user():
    """User management."""


@user.command("add")
@click.argument("name")
@click.option("--password", prompt=True, hide_input=True)
@click.pass_obj
def user_add(data_dir, name, password):
    from .auth import AuthService

    try:
        AuthService(FileStorage(data_dir)).register(name, password)
    except (CodeLearnError, ValueError) as exc:
        _fail(exc)
    click.echo(f"created user {name}")


if __name__ == "__main__":
    main()
