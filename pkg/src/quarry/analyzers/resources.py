"""Loaders for the analyzer configuration files.

Formats:
  gazetteer  TSV   surface <TAB> etype [<TAB> gender]
  lexicon    TSV   token <TAB> valence
  kb         JSONL {kb_id, canonical_name, aliases[], etype, description}
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from ..errors import GazetteerMissing, KbMissing, LexiconMissing
from ..text import tokenize
from .types import ENTITY_TYPES, KbEntity


@dataclass
class GazetteerEntry:
    etype: str
    gender: str | None = None


class Gazetteer:
    """Surface-form lookup; keys are normalized to lowercase token joins."""

    def __init__(self, entries: dict[str, GazetteerEntry]):
        self.entries = entries
        self.max_tokens = max((len(k.split(" ")) for k in entries), default=1)

    @staticmethod
    def normalize(surface: str) -> str:
        return " ".join(tokenize(surface))

    def lookup(self, surface: str) -> GazetteerEntry | None:
        return self.entries.get(self.normalize(surface))


def load_gazetteer(path: str) -> Gazetteer:
    if not os.path.isfile(path):
        raise GazetteerMissing(f"gazetteer file not readable: {path}")
    entries: dict[str, GazetteerEntry] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise GazetteerMissing(f"{path}:{lineno}: expected surface<TAB>etype")
            surface, etype = parts[0], parts[1].strip()
            if etype not in ENTITY_TYPES:
                raise GazetteerMissing(f"{path}:{lineno}: unknown entity type {etype!r}")
            gender = parts[2].strip().lower() if len(parts) > 2 and parts[2].strip() else None
            entries[Gazetteer.normalize(surface)] = GazetteerEntry(etype=etype, gender=gender)
    return Gazetteer(entries)


def load_lexicon(path: str) -> dict[str, float]:
    if not os.path.isfile(path):
        raise LexiconMissing(f"lexicon file not readable: {path}")
    lexicon: dict[str, float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise LexiconMissing(f"{path}:{lineno}: expected token<TAB>valence")
            try:
                valence = float(parts[1])
            except ValueError as exc:
                raise LexiconMissing(f"{path}:{lineno}: bad valence {parts[1]!r}") from exc
            if not -4.0 <= valence <= 4.0:
                raise LexiconMissing(f"{path}:{lineno}: valence out of [-4, 4]")
            lexicon[parts[0].strip().lower()] = valence
    return lexicon


def load_kb(path: str) -> dict[str, KbEntity]:
    if not os.path.isfile(path):
        raise KbMissing(f"knowledge base file not readable: {path}")
    kb: dict[str, KbEntity] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise KbMissing(f"{path}:{lineno}: bad JSON: {exc}") from exc
            entity = KbEntity(
                kb_id=data["kb_id"],
                canonical_name=data["canonical_name"],
                aliases=list(data.get("aliases", [])),
                etype=data.get("etype", "MISC"),
                description=data.get("description", ""),
            )
            if not entity.kb_id or not entity.canonical_name:
                raise KbMissing(f"{path}:{lineno}: kb_id and canonical_name are required")
            kb[entity.kb_id] = entity
    return kb
