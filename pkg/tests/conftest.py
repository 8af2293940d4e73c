import json

import pytest

from hcrs import SimplificationItem, WeightSet, default_resources


@pytest.fixture(scope="session")
def pack():
    return default_resources()


@pytest.fixture()
def weights():
    return WeightSet()


FIXTURE_ITEMS = [
    {
        "id": "i1",
        "source": "Patients are advised to administer two tablets of the analgesic medication every morning with water.",
        "output": "Take two tablets every morning. Drink water with your dose.",
        "references": ["Take two tablets each morning with water."],
    },
    {
        "id": "i2",
        "source": "According to the WHO, measles is a highly transmissible viral disease. For more information, contact us.",
        "output": "According to the WHO, measles is a virus that spreads easily. For more information, contact us.",
        "references": ["The WHO says measles is a virus that spreads very easily."],
    },
    {
        "id": "i3",
        "source": "It is imperative that the patient rests; noncompliance may exacerbate symptomatology.",
        "output": "You might perhaps rest today. We understand this can feel hard.",
        "references": ["You may want to rest today because it helps."],
    },
    {
        "id": "i4",
        "source": "Hypertension is a frequent comorbidity with idiopathic etiology in this population.",
        "output": "Hypertension is a comorbidity with idiopathic etiology.",
        "references": ["High blood pressure is common and its cause is unknown."],
    },
    {
        "id": "i5",
        "source": "Hand hygiene is recommended prior to contacting your doctor at the clinic.",
        "output": "First wash your hands. Then call your doctor at the clinic today.",
        "references": ["Wash your hands first, then call your doctor."],
    },
]


@pytest.fixture()
def fixture_items():
    return [SimplificationItem.from_json(rec) for rec in FIXTURE_ITEMS]


@pytest.fixture()
def fixture_corpus_path(tmp_path):
    path = tmp_path / "corpus.jsonl"
    path.write_text("".join(json.dumps(rec) + "\n" for rec in FIXTURE_ITEMS))
    return path
