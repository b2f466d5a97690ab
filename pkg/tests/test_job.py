import pytest
from pydantic import ValidationError

from src.shared.schemas.job import JobSpec


def test_depth_must_cover_both_margins():
    with pytest.raises(ValidationError):
        JobSpec(depth=3, margin=2)
    assert JobSpec(depth=4, margin=2).depth == 4


def test_job_id_is_deterministic():
    job = JobSpec(depth=4, margin=1, seed=3)
    assert len(job.job_id) == 8
    assert job.job_id == JobSpec(depth=4, margin=1, seed=3).job_id
    assert job.job_id != JobSpec(depth=4, margin=1, seed=4).job_id


def test_output_location_does_not_change_job_id(tmp_path):
    job = JobSpec(depth=4, margin=1)
    assert job.job_id == JobSpec(depth=4, margin=1, out=str(tmp_path / "r.json")).job_id


@pytest.mark.parametrize(
    "fields",
    [{"output_format": "yaml"}, {"battery": 0}, {"margin": -1}, {"depth": 0}],
)
def test_invalid_job_fields(fields):
    with pytest.raises(ValidationError):
        JobSpec(**fields)
