"""Fixtures for tests that go through the CLI entry point"""
import json
import logging

import pytest

from app.hdx.cli import main


@pytest.fixture(autouse=True)
def restore_root_logger():
    """main() reconfigures the root logger; put the test runner's handlers back afterwards"""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def hdx(capsys):
    """Run the CLI in-process; returns (exit code, stdout)"""

    def invoke(*argv):
        code = main([str(arg) for arg in argv] + ["--log-level", "ERROR"])
        return code, capsys.readouterr().out

    return invoke


@pytest.fixture
def hdx_json(hdx):
    def invoke(*argv):
        code, out = hdx(*argv)
        return code, json.loads(out) if out.strip() else None

    return invoke
