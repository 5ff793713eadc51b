import pytest

from tempolabel import CategoryCatalog, SwitchModel


@pytest.fixture(scope="session")
def catalog():
    return CategoryCatalog.default()


@pytest.fixture(scope="session")
def model():
    return SwitchModel(delta=0.1)


@pytest.fixture()
def annotations_csv(tmp_path):
    """Small two-annotator diary: p01 reports on the half hour, p02 to the minute."""
    path = tmp_path / "annotations.csv"
    path.write_text(
        "annotator_id,date,event_kind,start,end\n"
        "p01,2024-03-01,shower,08:00,08:30\n"
        "p01,2024-03-02,shower,07:30,08:00\n"
        "p01,2024-03-03,shower,08:30,09:00\n"
        "p01,2024-03-04,shower,07:00,07:30\n"
        "p02,2024-03-01,shower,07:12,07:41\n"
        "p02,2024-03-02,shower,08:03,08:27\n"
        "p02,2024-03-03,shower,07:58,08:22\n"
    )
    return path
