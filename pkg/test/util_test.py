# -*- mode: python; indent-tabs-mode: nil -*-

import logging
import threading

from choquard import util


def test_map_rows_keeps_order():
    assert util.map_rows(lambda x: x * x, range(10)) == [x * x for x in range(10)]
    assert util.map_rows(lambda x: x * x, range(10), workers=3) == [x * x for x in range(10)]


def test_map_rows_uses_threads():
    seen = set()

    def record(x):
        seen.add(threading.get_ident())
        return x

    assert util.map_rows(record, range(4), workers=2) == [0, 1, 2, 3]
    assert threading.get_ident() not in seen


def test_tagging_logger(caplog):
    logger = util.TaggingLogger(logging.getLogger('test'), {'tag': 'eps=0.5'})
    with caplog.at_level(logging.INFO, logger='test'):
        logger.info('row done')
    assert caplog.records[-1].getMessage() == '[eps=0.5] row done'
