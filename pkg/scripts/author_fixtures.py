"""Regenerate the bundled replay fixtures for the Cancer and Asia networks.

The responses are hand-written. Their edge lists reproduce the statement
counts of a strong chat model on these networks: Cancer yields five
statements, all true as paths; Asia yields ten, of which revision rejects
one, leaving nine.

    python scripts/author_fixtures.py
"""

from pathlib import Path

from causalprior.datasets import FIXTURE_MODEL, fixture_dir, load_network, network_domain
from causalprior.llm import build_prompts, write_exchange

RESPONSES = {
    "cancer": {
        "U": (
            "1. Pollution (low, high): the level of air pollution the person is exposed to.\n"
            "2. Smoker (True, False): whether the person smokes.\n"
            "3. Cancer (True, False): whether the person has lung cancer.\n"
            "4. Xray (positive, negative): the result of a chest X-ray.\n"
            "5. Dyspnoea (True, False): whether the person suffers from shortness of breath."
        ),
        "C": (
            "Pollution and smoking both damage lung tissue and raise the risk of cancer. Cancer shows up on "
            "the X-ray and causes breathing problems. Smoking also directly irritates the airways.\n"
            "<edge>Pollution->Cancer</edge>\n"
            "<edge>Smoker->Cancer</edge>\n"
            "<edge>Cancer->Xray</edge>\n"
            "<edge>Cancer->Dyspnoea</edge>\n"
            "<edge>Smoker->Dyspnoea</edge>"
        ),
        "R": (
            "1. CORRECT: air pollution is an established risk factor for lung cancer.\n"
            "2. CORRECT: smoking is the leading cause of lung cancer.\n"
            "3. CORRECT: a tumour produces a positive X-ray finding.\n"
            "4. CORRECT: lung cancer obstructs airways and causes dyspnoea.\n"
            "5. CORRECT: smoking damages the airways and causes shortness of breath."
        ),
    },
    "asia": {
        "U": (
            "1. asia (yes, no): whether the patient recently visited Asia.\n"
            "2. tub (yes, no): whether the patient has tuberculosis.\n"
            "3. smoke (yes, no): whether the patient smokes.\n"
            "4. lung (yes, no): whether the patient has lung cancer.\n"
            "5. bronc (yes, no): whether the patient has bronchitis.\n"
            "6. either (yes, no): whether the patient has tuberculosis or lung cancer.\n"
            "7. xray (yes, no): whether the chest X-ray is abnormal.\n"
            "8. dysp (yes, no): whether the patient has dyspnoea."
        ),
        "C": (
            "<edge>asia->tub</edge>\n"
            "<edge>smoke->lung</edge>\n"
            "<edge>smoke->bronc</edge>\n"
            "<edge>tub->either</edge>\n"
            "<edge>lung->either</edge>\n"
            "<edge>either->dysp</edge>\n"
            "<edge>bronc->dysp</edge>\n"
            "<edge>tub->xray</edge>\n"
            "<edge>lung->xray</edge>\n"
            "<edge>xray->dysp</edge>"
        ),
        "R": (
            "1. CORRECT: tuberculosis is more common in Asia.\n"
            "2. CORRECT: smoking causes lung cancer.\n"
            "3. CORRECT: smoking causes bronchitis.\n"
            "4. CORRECT: either is true when tuberculosis is present.\n"
            "5. CORRECT: either is true when lung cancer is present.\n"
            "6. CORRECT: both diseases cause dyspnoea.\n"
            "7. CORRECT: bronchitis causes dyspnoea.\n"
            "8. CORRECT: tuberculosis leaves marks on the X-ray.\n"
            "9. CORRECT: a tumour is visible on the X-ray.\n"
            "10. INCORRECT: an X-ray result is a test outcome and cannot cause dyspnoea."
        ),
    },
}


def author(name: str, out: Path):
    from causalprior.llm.parsing import parse_edge_statements

    bn = load_network(name)
    prompts = build_prompts(network_domain(name), bn.variables)
    replies = RESPONSES[name]
    history = [{"role": "user", "content": prompts.understand}]
    write_exchange(out, FIXTURE_MODEL, "U", list(history), replies["U"])
    history += [{"role": "assistant", "content": replies["U"]}, {"role": "user", "content": prompts.causal}]
    write_exchange(out, FIXTURE_MODEL, "C", list(history), replies["C"])
    proposed, _ = parse_edge_statements(replies["C"], bn.variables)
    history += [{"role": "assistant", "content": replies["C"]},
                {"role": "user", "content": prompts.revision_for(proposed)}]
    write_exchange(out, FIXTURE_MODEL, "R", list(history), replies["R"])


if __name__ == "__main__":
    for name in RESPONSES:
        d = fixture_dir(name)
        for old in d.glob("*.json"):
            old.unlink()
        author(name, d)
        print(f"wrote fixtures for {name} to {d}")
