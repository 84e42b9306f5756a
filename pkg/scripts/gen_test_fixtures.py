#!/usr/bin/env python3
"""Regenerate the ontology fixtures and the offline knowledge-base cache.

The cache entries imitate hydrated entity-search responses so the whole
enrichment pipeline can run with the network guard active.  Run from the
repository root:

    python3 scripts/gen_test_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from contron.kb import KbEntity, seed_search_cache  # noqa: E402
from contron.ontology import Ontology, OntologyClass, save  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"

CORE_CLASS_NAMES = [
    "Mass",
    "Volume",
    "Length",
    "Width",
    "Height",
    "Power",
    "Supply Voltage",
    "Current",
    "Frequency",
    "Data Rate",
    "Interface",
    "Hardware Interface",
    "Operating Temperature",
    "Storage Temperature",
    "Lifetime",
    "Radiation Tolerance",
    "Mechanical Vibration",
    "Shock",
    "Accuracy",
    "Resolution",
    "Sensitivity",
    "Range",
    "Field of View",
    "Update Rate",
    "Baud Rate",
    "Pressure",
]

STAR_TRACKER_CLASS_NAMES = [
    "Single Star Accuracy",
    "Single Star Accuracy Bias",
    "Single Star Accuracy Noise",
    "SNR",
    "Attitude Accuracy XY",
    "Attitude Accuracy Z",
    "Pixel Size X",
    "Pixel Size Y",
    "Update Rate",
    "Star Magnitude",
    "Sky Coverage",
    "Slew Rate",
    "Acquisition Time",
    "Focal Length",
    "Aperture",
    "Exposure Time",
    "Detector Type",
    "Pixel Count",
    "Baffle",
    "Sun Exclusion Angle",
    "Moon Exclusion Angle",
    "Earth Exclusion Angle",
    "Tracking Rate",
    "Catalog Size",
    "Star Catalog",
    "Optical Head",
    "Processing Unit",
    "Quaternion Output",
    "Image Processing",
]


def slug(name: str) -> str:
    return name.lower().replace(" ", "_")


def make_ontologies() -> None:
    core = Ontology(
        ontology_id="core",
        version=0,
        classes=[
            OntologyClass(class_id=f"core:{slug(n)}", name=n, intrinsic=True)
            for n in CORE_CLASS_NAMES
        ],
    )
    save(core, FIXTURES / "ontology" / "core.json")

    star = Ontology(
        ontology_id="star_tracker",
        version=0,
        imports=["core"],
        classes=[
            OntologyClass(class_id=f"st:{slug(n)}", name=n, intrinsic=True)
            for n in STAR_TRACKER_CLASS_NAMES
        ],
    )
    save(star, FIXTURES / "ontology" / "star_tracker.json")


def E(entity_id, label, description, aliases=(), categories=()):
    return KbEntity(
        entity_id=entity_id,
        label=label,
        description=description,
        aliases=list(aliases),
        category_ids=[f"{entity_id}-C{i}" for i in range(len(categories))],
        category_labels=list(categories),
    )


# Entities whose descriptions reuse corpus-domain vocabulary score high
# against the domain document; off-domain descriptions score near zero.
SEARCH_RESULTS: dict[str, list[KbEntity]] = {
    "Mass": [
        E("Q-MASS", "mass",
          "property of a physical body that causes it to have weight in a gravitational field",
          aliases=["rest mass"], categories=["physical property"]),
        E("Q-MASS-LIT", "Mass", "religious liturgy celebrated in churches",
          categories=["religious service"]),
        E("Q-MASS-ALBUM", "Mass", "studio album by an orchestral rock band",
          categories=["album"]),
    ],
    "Volume": [
        E("Q-VOLUME", "volume",
          "quantity of three-dimensional space occupied by a physical object or device",
          aliases=["capacity"], categories=["physical property"]),
        E("Q-VOLUME-BOOK", "volume", "single book of a printed publication series",
          categories=["publication"]),
    ],
    "Length": [
        E("Q-LENGTH", "length",
          "physical property of a device or sensor of a satellite: the dimension of the object from end to end",
          categories=["physical property"]),
        E("Q-LENGTH-FILM", "length", "running duration of a theatrical film print",
          categories=["film term"]),
    ],
    "Width": [],
    "Height": [],
    "Power": [
        E("Q-POWER", "power",
          "rate of doing work per period of time, measured in watts for an electrical device",
          aliases=["electric power", "power consumption", "input power"],
          categories=["physical property"]),
        E("Q-POWER-SOCIO", "power", "ability to influence people in social relations",
          categories=["social concept"]),
    ],
    "Supply Voltage": [
        E("Q-VOLTAGE", "voltage",
          "difference in electrical charge between two points of a device expressed in volts",
          aliases=["electric potential difference", "supply voltage", "input voltage"],
          categories=["physical property"]),
    ],
    "Current": [
        E("Q-CURRENT", "current",
          "flow of electrical charge carried by moving charges in a device",
          aliases=["electric current"], categories=["physical property"]),
        E("Q-CURRENT-WATER", "current", "steady flow of river water in one direction",
          categories=["hydrology"]),
    ],
    "Frequency": [
        E("Q-FREQ", "frequency",
          "physical property of a repeating signal of a device or sensor or antenna, the number of occurrences per second in hertz",
          aliases=["frequence"], categories=["physical property"]),
        E("Q-FREQ-STAT", "frequency", "count of how often a survey answer appears in a sample",
          categories=["statistics"]),
    ],
    "Data Rate": [
        E("Q-DATARATE", "data rate",
          "rate at which a device or sensor antenna transmits a signal to the satellite equipment, counted in bits per second",
          aliases=["data transfer rate", "data signaling rate"],
          categories=["physical property"]),
        E("Q-BITRATE", "bit rate",
          "number of bits of a signal sent per second by a device, a sensor, or satellite equipment",
          aliases=["bitrate"], categories=["physical property"]),
    ],
    "Interface": [
        E("Q-IFACE-HW", "interface",
          "hardware that connects a computer with another device or equipment and carries signals",
          aliases=["hardware interface", "physical interface"], categories=["device"]),
        E("Q-IFACE-SW", "interface",
          "shared boundary where a computer program exchanges signal data with another device or equipment",
          aliases=["software interface"], categories=["software"]),
        E("Q-IFACE-CHEM", "interface", "boundary layer between two immiscible liquid phases",
          categories=["chemistry"]),
    ],
    "Hardware Interface": [
        E("Q-HWIFACE", "hardware interface",
          "physical device boundary that connects electronic equipment and carries signals between a sensor and a computer",
          aliases=["physical interface"], categories=["device"]),
        E("Q-IFACE-STUDY", "hardware interface",
          "study on the design of physical property boundaries between equipment and signal devices",
          categories=["field of study"]),
    ],
    "Operating Temperature": [
        E("Q-OPTEMP", "operating temperature",
          "range of degree of hotness or coldness of the environment at which a device operates",
          aliases=["operational temperature", "temperature range"],
          categories=["temperature"]),
        E("Q-OVEN", "oven temperature", "temperature setting used in cooking recipes",
          categories=["cooking"]),
    ],
    "Storage Temperature": [],
    "Lifetime": [
        E("Q-LIFE", "service life",
          "period of time during which a device remains functional and usable in operation",
          aliases=["life span", "lifespan", "operational lifetime"],
          categories=["time period"]),
        E("Q-LIFE-TV", "Lifetime", "American cable television channel",
          categories=["television channel"]),
    ],
    "Radiation Tolerance": [],
    "Mechanical Vibration": [],
    "Shock": [
        E("Q-SHOCK-MED", "shock",
          "failure of the body where a medical device measures the degree of temperature and the blood flow of a person",
          categories=["medical condition"]),
        E("Q-SHOCK-MECH", "mechanical shock",
          "sudden transient acceleration pulse",
          aliases=["shock pulse"], categories=["phenomenon"]),
    ],
    "Accuracy": [
        E("Q-ACCURACY", "accuracy",
          "quality or property of a sensor measurement being near to the true value",
          aliases=["trueness"], categories=["property"]),
        E("Q-PRECISION", "precision",
          "property of a sensor or device whose repeated measurement values stay near each other",
          categories=["property"]),
    ],
    "Resolution": [
        E("Q-RESOLUTION-UN", "resolution",
          "formal decision voted by a deliberative assembly",
          categories=["politics"]),
    ],
    "Sensitivity": [
        E("Q-SENSE-EMO", "sensitivity",
          "emotional quality of a person who feels strongly",
          categories=["psychology"]),
    ],
    "Range": [
        E("Q-RANGE-MOUNT", "range", "chain of mountains forming a long ridge",
          categories=["landform"]),
        E("Q-RANGE-MATH", "range",
          "difference between the largest and smallest observed values",
          categories=["statistics"]),
    ],
    "Field of View": [
        E("Q-FOV", "field of view",
          "area that is visible through an optical instrument or sensor at a given moment",
          aliases=["FOV", "angle of view"], categories=["property"]),
    ],
    "Update Rate": [
        E("Q-UPDATE", "update rate",
          "frequency at which a device or sensor refreshes its output signal in a period of time",
          aliases=["refresh rate"], categories=["physical property"]),
    ],
    "Baud Rate": [],
    "Pressure": [
        E("Q-PRESSURE", "pressure",
          "physical force applied by a body per unit area, measured in pascals",
          aliases=["mechanical pressure"], categories=["physical property"]),
        E("Q-PRESSURE-SOC", "pressure", "psychological feeling of stress from social demands",
          categories=["psychology"]),
    ],
}

# Expert truth used by the iteration tests: class -> correct entity.
TRUTH = {
    "core:mass": "Q-MASS",
    "core:volume": "Q-VOLUME",
    "core:length": "Q-LENGTH",
    "core:power": "Q-POWER",
    "core:supply_voltage": "Q-VOLTAGE",
    "core:current": "Q-CURRENT",
    "core:frequency": "Q-FREQ",
    "core:data_rate": "Q-DATARATE",
    "core:interface": "Q-IFACE-HW",
    "core:hardware_interface": "Q-HWIFACE",
    "core:operating_temperature": "Q-OPTEMP",
    "core:lifetime": "Q-LIFE",
    "core:shock": "Q-SHOCK-MECH",
    "core:accuracy": "Q-ACCURACY",
    "core:field_of_view": "Q-FOV",
    "core:update_rate": "Q-UPDATE",
    "core:pressure": "Q-PRESSURE",
}


def make_kb_cache() -> None:
    cache_dir = FIXTURES / "kb_cache"
    for old in cache_dir.glob("*.json"):
        old.unlink()
    for name in CORE_CLASS_NAMES:
        seed_search_cache(cache_dir, name, SEARCH_RESULTS.get(name, []))
    # specialized ontology classes: the generic knowledge base knows none
    # (names shared with the core ontology keep the core results)
    for name in STAR_TRACKER_CLASS_NAMES:
        if name not in CORE_CLASS_NAMES:
            seed_search_cache(cache_dir, name, [])
    (FIXTURES / "truth.json").write_text(
        json.dumps(TRUTH, indent=2, sort_keys=True) + "\n", "utf-8"
    )


if __name__ == "__main__":
    make_ontologies()
    make_kb_cache()
    print(f"fixtures written under {FIXTURES}")
