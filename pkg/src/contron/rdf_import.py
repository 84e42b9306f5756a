"""Import a minimal RDF/XML subset into the native ontology format.

Only class declarations and label-ish annotations are read: ``owl:Class`` /
``rdfs:Class`` declarations, ``rdfs:label``, ``skos:prefLabel``,
``skos:altLabel``, ``rdfs:comment`` / ``skos:definition``, and
``rdfs:subClassOf``.  Everything else (restrictions, axioms, properties) is
skipped and logged; the enrichment algorithms only consume names, labels,
and the class tree, so a full reasoner stack would be dead weight here.
"""

from __future__ import annotations

import logging
from pathlib import Path
from xml.etree import ElementTree

from .errors import OntologyFormatError
from .ontology import Ontology, OntologyClass, validate

logger = logging.getLogger(__name__)

RDF = "{http://www.w3.org/1999/02/22-rdf-syntax-ns#}"
RDFS = "{http://www.w3.org/2000/01/rdf-schema#}"
OWL = "{http://www.w3.org/2002/07/owl#}"
SKOS = "{http://www.w3.org/2004/02/skos/core#}"

_CLASS_TAGS = {f"{OWL}Class", f"{RDFS}Class"}
_CLASS_TYPES = {
    "http://www.w3.org/2002/07/owl#Class",
    "http://www.w3.org/2000/01/rdf-schema#Class",
}


def _fragment(uri: str) -> str:
    if "#" in uri:
        return uri.rsplit("#", 1)[1]
    return uri.rstrip("/").rsplit("/", 1)[-1]


def _prettify(fragment: str) -> str:
    import re

    spaced = re.sub(r"(?<=[a-z0-9])(?=[A-Z])", " ", fragment)
    return spaced.replace("_", " ").replace("-", " ").strip()


def _is_class_element(element: ElementTree.Element) -> bool:
    if element.tag in _CLASS_TAGS:
        return True
    if element.tag == f"{RDF}Description":
        for node in element.findall(f"{RDF}type"):
            if node.get(f"{RDF}resource") in _CLASS_TYPES:
                return True
    return False


def import_rdf_xml(path: str | Path, ontology_id: str | None = None) -> Ontology:
    """Read class declarations and labels from an RDF/XML file."""
    path = Path(path)
    try:
        tree = ElementTree.parse(path)
    except ElementTree.ParseError as exc:
        raise OntologyFormatError(f"not parseable RDF/XML: {exc}", str(path)) from exc
    root = tree.getroot()
    classes: list[OntologyClass] = []
    skipped = 0
    for element in root:
        if not _is_class_element(element):
            skipped += 1
            continue
        about = element.get(f"{RDF}about") or element.get(f"{RDF}ID")
        if not about:
            skipped += 1
            continue
        class_id = _fragment(about)
        labels = [n.text.strip() for n in element.findall(f"{RDFS}label") if n.text]
        labels += [n.text.strip() for n in element.findall(f"{SKOS}prefLabel") if n.text]
        alt_labels = [n.text.strip() for n in element.findall(f"{SKOS}altLabel") if n.text]
        descriptions = [n.text.strip() for n in element.findall(f"{RDFS}comment") if n.text]
        descriptions += [n.text.strip() for n in element.findall(f"{SKOS}definition") if n.text]
        parent = None
        for node in element.findall(f"{RDFS}subClassOf"):
            resource = node.get(f"{RDF}resource")
            if resource:
                parent = _fragment(resource)
                break
            skipped += 1  # anonymous superclass (restriction); not supported
        name = labels[0] if labels else _prettify(class_id)
        classes.append(
            OntologyClass(
                class_id=class_id,
                name=name,
                labels=labels[1:],
                alt_labels=alt_labels,
                description=descriptions[0] if descriptions else None,
                parent=parent,
                intrinsic=True,
            )
        )
    if skipped:
        logger.info("skipped %d unsupported RDF constructs in %s", skipped, path)
    known = {c.class_id for c in classes}
    for cls in classes:
        if cls.parent is not None and cls.parent not in known:
            logger.info("dropping external parent %r of %r", cls.parent, cls.class_id)
            cls.parent = None
    ontology = Ontology(ontology_id=ontology_id or path.stem, version=0, classes=classes)
    validate(ontology)
    return ontology
