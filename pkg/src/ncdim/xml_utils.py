#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
XML utilities - Helpers for building, reading back and writing SVG documents with lxml.
"""

from typing import Union

from lxml import etree

from .utils import *

SVG_NAMESPACE = r'http://www.w3.org/2000/svg'

PARSER = etree.XMLParser(encoding=r'utf-8', remove_comments=True, remove_pis=True, ns_clean=True)


def make_child(parent, tag_name: str, **attrs):
    assert parent is not None
    assert tag_name
    # trailing underscores escape keywords (class_), inner ones become dashes (stroke_width)
    attrs = {k.rstrip(r'_').replace(r'_', r'-'): str(v) for k, v in attrs.items()}
    return etree.SubElement(parent, tag_name, attrib=attrs)


def read(source: Union[str, Path], logger=None):
    """Parses an SVG (or any XML) file or string and returns its root element."""
    if isinstance(source, Path):
        source = read_all_text_from_file(source, logger=logger)
    return etree.fromstring(source.encode(r'utf-8'), parser=PARSER)


def local_name(element) -> str:
    """Tag name without its namespace."""
    return etree.QName(element).localname


def write(root, dest: Path, logger=None):
    assert root is not None
    dest = coerce_path(dest)
    dest.parent.mkdir(parents=True, exist_ok=True)
    try:
        etree.ElementTree(root).write(str(dest), encoding=r'utf-8', xml_declaration=True, pretty_print=True)
    except OSError as err:
        raise Error(rf'could not write {dest}: {err}')
    log(logger, rf'Wrote {dest}')


__all__ = ['SVG_NAMESPACE', 'PARSER', 'make_child', 'read', 'local_name', 'write']
