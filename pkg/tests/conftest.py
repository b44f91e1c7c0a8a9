"""Shared fixtures for the test suite."""

from __future__ import annotations

import pytest

from paraprobe.corpus import load_corpus, sample_corpus_path
from paraprobe.rules import load_default_suite


@pytest.fixture(scope="session")
def suite():
    return load_default_suite()


@pytest.fixture(scope="session")
def pn_corpus():
    return load_corpus(sample_corpus_path("proofnet_sharp"))


@pytest.fixture(scope="session")
def mf2f_corpus():
    return load_corpus(sample_corpus_path("minif2f"))
