#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
Functions and classes for writing SVG figures.
"""

from typing import Sequence, Union

from lxml import etree

from . import xml_utils
from .utils import *


def _fmt(x: float) -> str:
    return rf'{float(x):.6f}'


class SVG(object):
    """
    A figure in plane coordinates. Points are complex numbers; the y axis is flipped on output so that
    the imaginary axis points up.
    """

    def __init__(
        self,  #
        lower: complex,
        upper: complex,
        width: float = 600.0,
        margin: float = 0.05,
        root_id: str = None,
        root_classes: Union[str, Sequence[str]] = None,
    ):
        lower, upper = complex(lower), complex(upper)
        span = upper - lower
        if not (span.real > 0.0 and span.imag > 0.0):
            raise DomainError(rf'SVG extent must have positive width and height (got {lower} to {upper})')
        pad = margin * max(span.real, span.imag)
        self.__lower = lower - complex(pad, pad)
        self.__upper = upper + complex(pad, pad)
        span = self.__upper - self.__lower
        self.__scale = width / span.real
        height = span.imag * self.__scale

        self.__xml = etree.Element(
            r'svg',
            nsmap={None: xml_utils.SVG_NAMESPACE},
            attrib={
                r'version': r'1.1',
                r'width': _fmt(width),
                r'height': _fmt(height),
                r'viewBox': rf'0 0 {_fmt(width)} {_fmt(height)}',
            },
        )
        if root_id:
            self.__xml.attrib[r'id'] = str(root_id).strip()
        if root_classes is not None:
            root_classes = list(coerce_collection(root_classes))
            if root_classes:
                self.__xml.attrib[r'class'] = r' '.join(root_classes)

    @property
    def root(self):
        return self.__xml

    def point(self, z: complex) -> typing.Tuple[str, str]:
        z = complex(z)
        return (
            _fmt((z.real - self.__lower.real) * self.__scale),
            _fmt((self.__upper.imag - z.imag) * self.__scale),
        )

    def length(self, r: float) -> str:
        return _fmt(r * self.__scale)

    def group(self, parent=None, **attrs):
        return xml_utils.make_child(self.__xml if parent is None else parent, r'g', **attrs)

    def polygon(self, points, parent=None, **attrs):
        pts = r' '.join(r','.join(self.point(z)) for z in points)
        return xml_utils.make_child(self.__xml if parent is None else parent, r'polygon', points=pts, **attrs)

    def circle(self, center: complex, radius: float, parent=None, **attrs):
        cx, cy = self.point(center)
        return xml_utils.make_child(
            self.__xml if parent is None else parent, r'circle', cx=cx, cy=cy, r=self.length(radius), **attrs
        )

    def line(self, start: complex, end: complex, parent=None, **attrs):
        x1, y1 = self.point(start)
        x2, y2 = self.point(end)
        return xml_utils.make_child(
            self.__xml if parent is None else parent, r'line', x1=x1, y1=y1, x2=x2, y2=y2, **attrs
        )

    def text(self, at: complex, content: str, parent=None, **attrs):
        x, y = self.point(at)
        elem = xml_utils.make_child(self.__xml if parent is None else parent, r'text', x=x, y=y, **attrs)
        elem.text = str(content)
        return elem

    def write(self, path: Path, logger=None):
        xml_utils.write(self.__xml, path, logger=logger)

    def __str__(self) -> str:
        return etree.tostring(self.__xml, encoding=r'unicode', xml_declaration=False, pretty_print=False)


__all__ = ['SVG']
