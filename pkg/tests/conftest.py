import numpy as np
import pytest

from moff.data import synth_corpus


def two_vocab_corpus(seed: int = 0) -> list[list[str]]:
    """100 documents over two disjoint 24-word lexicons, 50 per group.

    Each document repeats a private 5-word subset of its group's lexicon, so
    documents are distinguishable inside a group as well as across groups.
    """
    rng = np.random.default_rng(seed)
    docs = []
    for group in "ab":
        lexicon = [f"{group}{i}" for i in range(24)]
        for _ in range(50):
            subset = rng.choice(lexicon, 5, replace=False)
            docs.append([str(w) for w in rng.choice(subset, 15)])
    return docs


@pytest.fixture(scope="session")
def two_vocab():
    return two_vocab_corpus()


@pytest.fixture(scope="session")
def synth():
    return synth_corpus(7, 500, 200)


# -- acceptance summary: one line per criterion --------------------------------

_criteria: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _criteria.setdefault(number, {"title": title, "status": "PASS", "detail": []})
    if rep.skipped and rep.when in ("setup", "call"):
        if entry["status"] == "PASS":
            entry["status"] = "SKIP"
        entry["detail"].append(str(rep.longrepr[-1]) if isinstance(rep.longrepr, tuple) else "")
    elif rep.failed:
        entry["status"] = "FAIL"
        entry["detail"].append(item.name)
    if rep.when == "call":
        entry["detail"].extend(f"{k}={v}" for k, v in rep.user_properties)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        detail = "; ".join(d for d in e["detail"] if d)
        line = f"criterion {number} {e['status']}: {e['title']}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
