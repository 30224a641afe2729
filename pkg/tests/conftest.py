"""Shared helpers for the test suite."""

import io
import tarfile

import pytest


def make_collection_archive(name, mtx_bytes, member=None):
    """tar.gz shaped like the collection serves: name/name.mtx inside."""
    buf = io.BytesIO()
    member = member if member is not None else f"{name}/{name}.mtx"
    with tarfile.open(fileobj=buf, mode="w:gz") as tf:
        info = tarfile.TarInfo(member)
        info.size = len(mtx_bytes)
        tf.addfile(info, io.BytesIO(mtx_bytes))
    return buf.getvalue()


@pytest.fixture
def collection_archive():
    return make_collection_archive
