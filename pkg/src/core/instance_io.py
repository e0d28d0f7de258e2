import sys
from pathlib import Path

import structlog

from src.core.codec import parse_instance, parse_patterns, serialize_instance
from src.core.errors import InstanceFormatError
from src.core.model import BUILTIN_PATTERNS, GraphInstance, Instance, PatternSet

# Initialize logger for this module
logger = structlog.get_logger(__name__)

INSTANCE_SUFFIXES = (".hs", ".sp", ".gr")


class InstanceStore:
    """
    Loads and writes instance files. `-` stands for stdin / stdout.
    """

    def read_text(self, source: str) -> str:
        if source == "-":
            return sys.stdin.read()
        return Path(source).read_text(encoding="utf-8")

    def load(self, source: str) -> Instance | GraphInstance:
        # Bind file-specific context to all logs in this method
        log = logger.bind(source=source)

        try:
            text = self.read_text(source)
            log.debug("instance_read", chars=len(text))

            instance = parse_instance(text)
            log.info("instance_loaded", kind=instance.kind.value, n=instance.n, m=instance.m)
            return instance

        except InstanceFormatError as e:
            log.error("instance_invalid", line=e.line, error=e.message)
            raise
        except OSError as e:
            log.error("instance_unreadable", error=str(e))
            raise InstanceFormatError(f"cannot read {source}: {e.strerror}") from e

    def save(self, instance: Instance | GraphInstance, target: str) -> int:
        """Writes the serialized instance; returns the number of characters."""
        text = serialize_instance(instance)
        if target == "-":
            sys.stdout.write(text)
        else:
            Path(target).write_text(text, encoding="utf-8")
        logger.debug("instance_saved", target=target, chars=len(text))
        return len(text)

    def corpus(self, directory: str) -> list[Path]:
        """Instance files of a directory, sorted by name."""
        root = Path(directory)
        if not root.is_dir():
            raise InstanceFormatError(f"not a directory: {directory}")
        files = sorted(p for p in root.iterdir() if p.suffix in INSTANCE_SUFFIXES)
        logger.info("corpus_listed", directory=directory, files=len(files))
        return files

    def load_patterns(self, spec: str) -> PatternSet:
        """
        Comma-separated built-in names and `@file` references,
        e.g. `k3`, `k3,p3` or `@claw.pat`.
        """
        patterns = []
        for token in (part.strip() for part in spec.split(",")):
            if not token:
                continue
            if token.startswith("@"):
                path = token[1:]
                try:
                    text = Path(path).read_text(encoding="utf-8")
                except OSError as e:
                    raise InstanceFormatError(f"cannot read {path}: {e.strerror}") from e
                patterns.extend(parse_patterns(text, name=Path(path).stem).patterns)
            elif token.lower() in BUILTIN_PATTERNS:
                patterns.append(BUILTIN_PATTERNS[token.lower()])
            else:
                raise InstanceFormatError(
                    f"unknown pattern '{token}' (built-ins: {', '.join(BUILTIN_PATTERNS)})"
                )

        if not patterns:
            raise InstanceFormatError("empty pattern list")
        logger.debug("patterns_loaded", names=[p.name for p in patterns])
        return PatternSet(patterns=patterns)
