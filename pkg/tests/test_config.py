import pytest
from pydantic import ValidationError

from config import Settings


def test_bounds_must_allow_two():
    with pytest.raises(ValidationError):
        Settings(MAX_DEGREE=1)
    with pytest.raises(ValidationError):
        Settings(MAX_WREATH_DOMAIN=3)


def test_log_level_is_normalised():
    assert Settings(LOG_LEVEL="debug").LOG_LEVEL == "DEBUG"
    assert Settings(LOG_LEVEL="verbose").LOG_LEVEL == "INFO"


def test_margin_must_not_be_negative():
    with pytest.raises(ValidationError):
        Settings(DEFAULT_MARGIN=-1)
    with pytest.raises(ValidationError):
        Settings(DEFAULT_BATTERY=0)


def test_assignment_is_validated():
    settings = Settings()
    with pytest.raises(ValidationError):
        settings.MAX_ENUMERATION = 0
