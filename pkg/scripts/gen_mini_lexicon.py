#!/usr/bin/env python3
"""Regenerate the bundled mini lexical database.

The database is hand-authored (not derived from any published wordlist) but
uses the standard index/data plain-text layout, so the production loader can
be exercised hermetically.  Run from the repository root:

    python3 scripts/gen_mini_lexicon.py
"""

from __future__ import annotations

from pathlib import Path

OUT_DIR = Path(__file__).resolve().parents[1] / "src" / "contron" / "data" / "mini_wordnet"

# (key, pos, lemmas, hypernym keys, gloss)
# Master-list order fixes the sense order of every shared lemma.
SYNSETS = [
    # noun taxonomy, rooted at "entity"
    ("entity", "n", ["entity"], [], "that which is perceived or known or inferred to have its own distinct existence"),
    ("physical_entity", "n", ["physical_entity"], ["entity"], "an entity that has physical existence"),
    ("abstraction", "n", ["abstraction", "abstract_entity"], ["entity"], "a general concept formed by extracting common features from specific examples"),
    ("object", "n", ["object", "physical_object"], ["physical_entity"], "a tangible and visible entity"),
    ("location", "n", ["location"], ["object"], "a point or extent in space"),
    ("region", "n", ["region"], ["location"], "the extended spatial location of something"),
    ("space_attr", "n", ["space", "infinite"], ["attribute"], "the unlimited expanse in which everything is located"),
    ("outer_space", "n", ["outer_space", "space"], ["region"], "the region of the universe beyond the earth's atmosphere"),
    ("whole", "n", ["whole", "unit"], ["object"], "an assemblage of parts that is regarded as a single entity"),
    ("artifact", "n", ["artifact", "artefact"], ["whole"], "a man-made object taken as a whole"),
    ("instrumentality", "n", ["instrumentality", "instrumentation"], ["artifact"], "an artifact designed to accomplish some purpose"),
    ("device", "n", ["device"], ["instrumentality"], "an instrumentality invented for a particular purpose"),
    ("equipment", "n", ["equipment"], ["instrumentality"], "an instrumentality needed for an undertaking"),
    ("antenna", "n", ["antenna", "aerial", "transmitting_aerial"], ["device"], "an electrical device that sends or receives radio or television signals"),
    ("sensor", "n", ["sensor", "detector", "sensing_element"], ["device"], "any device that receives a signal or stimulus and responds to it"),
    ("satellite_art", "n", ["satellite", "artificial_satellite", "orbiter"], ["equipment"], "man-made equipment that orbits around the earth or the moon"),
    ("satellite_moon", "n", ["satellite", "moon"], ["celestial_body"], "any celestial body orbiting around a planet or star"),
    ("star_tracker", "n", ["star_tracker"], ["sensor"], "an optical device that measures the positions of stars to determine the attitude of a spacecraft"),
    ("magnetometer", "n", ["magnetometer", "gaussmeter"], ["sensor"], "a sensor for measuring the strength and direction of a magnetic field"),
    ("natural_object", "n", ["natural_object"], ["object"], "an object occurring naturally; not made by man"),
    ("celestial_body", "n", ["celestial_body", "heavenly_body"], ["natural_object"], "a natural object visible in the sky"),
    ("star", "n", ["star"], ["celestial_body"], "a celestial body of hot gases that radiates energy"),
    ("attribute", "n", ["attribute"], ["abstraction"], "an abstraction belonging to or characteristic of an entity"),
    ("property", "n", ["property", "dimension"], ["attribute"], "a basic or essential attribute shared by all members of a class"),
    ("physical_property", "n", ["physical_property"], ["property"], "any property used to characterize matter and energy and their interactions"),
    ("mass", "n", ["mass"], ["physical_property"], "the property of a body that causes it to have weight in a gravitational field"),
    ("temperature", "n", ["temperature"], ["physical_property"], "the degree of hotness or coldness of a body or environment"),
    ("measure", "n", ["measure", "quantity", "amount"], ["abstraction"], "how much there is or how many there are of something that you can quantify"),
    ("time_period", "n", ["time_period", "period_of_time", "period"], ["measure"], "an amount of time"),
    ("lifetime", "n", ["lifetime", "life-time", "lifespan", "life_span"], ["time_period"], "the period during which something is functional and usable"),
    ("time_unit", "n", ["time_unit", "unit_of_time"], ["measure"], "a unit for measuring time periods"),
    ("year", "n", ["year", "twelvemonth", "yr"], ["time_unit"], "a period of time containing 365 or 366 days"),
    ("process", "n", ["process", "physical_process"], ["physical_entity"], "a sustained phenomenon marked by gradual changes through a series of states"),
    ("phenomenon", "n", ["phenomenon"], ["process"], "any state or process known through the senses"),
    ("field", "n", ["field", "field_of_force", "force_field"], ["phenomenon"], "the space around a radiating body within which its influence can be detected"),
    ("magnetic_field", "n", ["magnetic_field", "magnetic_flux", "flux"], ["field"], "the lines of force surrounding a permanent magnet or a moving charged particle"),
    ("communication", "n", ["communication"], ["abstraction"], "something that is communicated by or to or between people or groups"),
    ("signal", "n", ["signal", "signaling", "sign"], ["communication"], "any incitement to action transmitted as an encoded message"),
    ("frequency", "n", ["frequency", "frequence", "oscillation"], ["physical_property"], "the number of occurrences within a given time period"),
    ("power", "n", ["power"], ["physical_property"], "the rate of doing work; measured in watts"),
    ("propulsion_system", "n", ["propulsion_system"], ["equipment"], "the equipment that provides the force that moves a vehicle forward"),
    ("field_of_view", "n", ["field_of_view", "fov"], ["space_attr"], "the area that is visible through an optical instrument"),
    ("accuracy", "n", ["accuracy", "truth"], ["property"], "the quality of being near to the true value"),
    ("noise", "n", ["noise", "interference", "disturbance"], ["signal"], "electrical or acoustic activity that can disturb communication"),
    ("voltage", "n", ["voltage", "electromotive_force", "emf"], ["physical_property"], "the difference in electrical charge between two points expressed in volts"),
    ("interface", "n", ["interface", "port"], ["device"], "hardware that connects a computer with another device or system"),
    # verbs, rooted at "put"
    ("put_v", "v", ["put", "set", "place"], [], "put into a certain place or abstract location"),
    ("space_v", "v", ["space"], ["put_v"], "place at intervals"),
    # one adjective cluster, disconnected from the noun taxonomy
    ("spatial_a", "a", ["spatial", "spacial"], [], "pertaining to or involving or having the nature of space"),
]

POS_FILE = {"n": "noun", "v": "verb", "a": "adj"}
LEX_FILENUM = {"n": "03", "v": "30", "a": "00"}

HEADER = (
    "  1 Mini lexical database in the standard index/data plain-text layout.\n"
    "  2 Hand-authored for hermetic tests; not derived from a published database.\n"
)


def data_line(pos: str, offset: int, lemmas, hyper_offsets, gloss: str) -> str:
    parts = [f"{offset:08d}", LEX_FILENUM[pos], pos, f"{len(lemmas):02x}"]
    for lemma in lemmas:
        parts += [lemma, "0"]
    parts.append(f"{len(hyper_offsets):03d}")
    for h in hyper_offsets:
        parts += ["@", f"{h:08d}", pos, "0000"]
    if pos == "v":
        parts.append("00")  # verb frame count
    return " ".join(parts) + " | " + gloss


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    by_pos: dict[str, list] = {}
    for entry in SYNSETS:
        by_pos.setdefault(entry[1], []).append(entry)

    offsets: dict[str, int] = {}
    for pos, entries in by_pos.items():
        # First pass with dummy offsets fixes every line length, because the
        # offset fields are fixed-width.
        cursor = len(HEADER.encode())
        for key, _pos, lemmas, hypers, gloss in entries:
            offsets[key] = cursor
            line = data_line(pos, 0, lemmas, [0] * len(hypers), gloss)
            cursor += len(line.encode()) + 1

    for pos, entries in by_pos.items():
        lines = [
            data_line(pos, offsets[key], lemmas, [offsets[h] for h in hypers], gloss)
            for key, _pos, lemmas, hypers, gloss in entries
        ]
        data_text = HEADER + "\n".join(lines) + "\n"
        blob = data_text.encode()
        for key, _pos, lemmas, hypers, gloss in entries:
            want = f"{offsets[key]:08d} ".encode()
            got = blob[offsets[key] : offsets[key] + len(want)]
            assert got == want, f"offset mismatch for {key}: record starts with {got!r}"
        (OUT_DIR / f"data.{POS_FILE[pos]}").write_text(data_text, "utf-8")

        index: dict[str, list[int]] = {}
        has_ptr: dict[str, bool] = {}
        for key, _pos, lemmas, hypers, gloss in entries:
            for lemma in lemmas:
                index.setdefault(lemma, []).append(offsets[key])
                has_ptr[lemma] = has_ptr.get(lemma, False) or bool(hypers)
        index_lines = []
        for lemma in sorted(index):
            offs = index[lemma]
            ptr = "1 @" if has_ptr[lemma] else "0"
            offs_txt = " ".join(f"{o:08d}" for o in offs)
            index_lines.append(f"{lemma} {pos} {len(offs)} {ptr} {len(offs)} 0 {offs_txt}")
        (OUT_DIR / f"index.{POS_FILE[pos]}").write_text(
            HEADER + "\n".join(index_lines) + "\n", "utf-8"
        )

    print(f"wrote {len(SYNSETS)} synsets to {OUT_DIR}")


if __name__ == "__main__":
    main()
