# -*- mode: python; indent-tabs-mode: nil -*-

# Part of choquard-harness: numerics for Choquard-Hardy-Sobolev problems
# Copyright (C) 2026  The choquard-harness authors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as
# published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.

# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
Report files: CSV tables and JSON documents, written atomically.

Floats in CSV use 17 significant digits; JSON is written with sorted keys,
so identical runs give byte-identical files.
"""

import logging
import math
import numbers
import os
from contextlib import closing

import numpy
import ujson

from choquard import config

__all__ = ('OutputSet', 'format_value', 'plain', 'write_csv', 'write_json')

glogger = logging.getLogger("output")


def csv_quote(s):
    if s is None:
        return ''
    if s.find('\n') == -1 and s.find('"') == -1 and s.find(',') == -1:
        return s
    else:
        return '"' + s.replace('"', '""') + '"'


def format_value(v):
    if v is None:
        return ''
    if isinstance(v, str):
        return csv_quote(v)
    if isinstance(v, (bool, numpy.bool_)):
        return 'true' if v else 'false'
    if isinstance(v, numbers.Integral):
        return str(int(v))
    return config.FLOAT_FORMAT.format(float(v))


def plain(obj):
    """Convert a report to JSON-encodable builtins. NaN becomes null and
    infinities the strings "inf" / "-inf"."""

    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, numpy.ndarray):
        return [plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, numpy.bool_)):
        return bool(obj)
    if isinstance(obj, numbers.Integral):
        return int(obj)
    if isinstance(obj, numbers.Real):
        v = float(obj)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return 'inf' if v > 0 else '-inf'
        return v
    return obj


def _replace(filename, text):
    tmpfile = filename + '.tmp'
    with closing(open(tmpfile, 'w')) as f:
        f.write(text)
    os.replace(tmpfile, filename)


def write_csv(filename, header, rows):
    lines = [','.join(header)]
    for row in rows:
        lines.append(','.join(format_value(v) for v in row))
    _replace(filename, '\n'.join(lines) + '\n')
    glogger.info('Wrote {0} ({1} rows)'.format(filename, len(lines) - 1))


def write_json(filename, document):
    _replace(filename, ujson.dumps(plain(document), sort_keys=True, indent=2, escape_forward_slashes=False) + '\n')
    glogger.info('Wrote {0}'.format(filename))


class OutputSet(object):
    """The report files of one command run in one directory. Each JSON
    document gets the resolved configuration under "config"."""

    def __init__(self, directory, formats, config_echo):
        self.directory = directory
        self.formats = tuple(formats)
        self.config_echo = config_echo
        self.written = []

    def _path(self, name):
        os.makedirs(self.directory, exist_ok=True)
        path = os.path.join(self.directory, name)
        self.written.append(path)
        return path

    def csv(self, name, header, rows):
        if 'csv' in self.formats:
            write_csv(self._path(name), header, rows)

    def json(self, name, document):
        if 'json' in self.formats:
            document = dict(document)
            document['config'] = self.config_echo
            write_json(self._path(name), document)
