import logging

import main
from src.core.services.system_utilities import job_id_var


def test_job_id_filter_copies_context():
    record = logging.LogRecord("x", logging.INFO, __file__, 1, "msg", None, None)
    token = job_id_var.set("abc12345")
    try:
        assert main.JobIdFilter().filter(record)
    finally:
        job_id_var.reset(token)
    assert record.job_id == "abc12345"


def test_configure_logging_initialises_sentry(monkeypatch):
    calls = {}
    monkeypatch.setattr(main, "ERROR_TRACKING_DSN", "https://key@example.invalid/1")
    monkeypatch.setattr(main.sentry_sdk, "init", lambda **kwargs: calls.update(kwargs))
    main.configure_logging("INFO")
    assert calls["release"] == f"box-product@{main.APP_VERSION}"
    assert calls["dsn"] == "https://key@example.invalid/1"
    assert all(
        any(isinstance(f, main.JobIdFilter) for f in handler.filters)
        for handler in logging.getLogger().handlers
    )


def test_main_returns_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(main, "ERROR_TRACKING_DSN", None)
    assert main.main(["quotient"]) == 0
    assert '"x_orbits": 1' in capsys.readouterr().out
