"""Resolution of label-style names such as sio:`in relation to'."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from ..graph import Iri

_SPACES = re.compile(r"\s+")


def normalize_label(text: str) -> str:
    return _SPACES.sub(" ", text.strip()).casefold()


def camel_case(text: str) -> str:
    """'in relation to' -> 'inRelationTo'; 'System Recommendation' -> 'SystemRecommendation'."""
    words = _SPACES.split(text.strip())
    if not words or words == [""]:
        return ""
    return words[0] + "".join(w[:1].upper() + w[1:] for w in words[1:])


@dataclass
class Names:
    """Label and alias lookups used while parsing.

    ``aliases`` maps normalized label text (and bare local names) to IRIs.
    ``default_terms`` maps local names written with the empty prefix
    (``:addresses``) onto their canonical vocabulary IRIs.
    """

    aliases: Mapping[str, Iri] = field(default_factory=dict)
    default_terms: Mapping[str, Iri] = field(default_factory=dict)

    def quoted(self, namespace: str, text: str) -> Iri:
        hit = self.aliases.get(normalize_label(text))
        if hit is not None and hit.value.startswith(namespace):
            return hit
        return Iri(namespace + camel_case(text))

    def bare(self, text: str) -> Iri | None:
        return self.aliases.get(normalize_label(text))

    def canonical_default(self, iri: Iri, local: str) -> Iri:
        return self.default_terms.get(local, iri)


def default_names() -> Names:
    from ..schema import builtin_ontology

    return builtin_ontology().names
