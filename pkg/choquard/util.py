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
Random utilities that don't fit elsewhere.
"""

import asyncio
import concurrent.futures
import logging

import uvloop

__all__ = ('mainLoop', 'TaggingLogger', 'map_rows', 'setproctitle')


def loop_handle_exception(loop, context):
    exception = context.get("exception")
    if exception:
        logging.exception("asyncio loop exception")
    else:
        msg = context["message"]
        logging.warning("Caught exception: {0}".format(msg))


mainLoop = uvloop.new_event_loop()
mainLoop.set_exception_handler(loop_handle_exception)


async def _gather_rows(loop, executor, fn, items):
    return await asyncio.gather(*[loop.run_in_executor(executor, fn, item) for item in items])


def map_rows(fn, items, workers=1):
    """[fn(item) for item in items], with the calls spread over a thread pool
    driven from the main loop when workers > 1. Results keep input order."""

    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return mainLoop.run_until_complete(_gather_rows(mainLoop, executor, fn, items))


class TaggingLogger(logging.LoggerAdapter):
    def process(self, msg, kwargs):
        if 'tag' in self.extra:
            return ('[{tag}] {0}'.format(msg, **self.extra), kwargs)
        else:
            return (msg, kwargs)


def setproctitle(title):
    """Set the process title. This implementation does nothing."""
    pass


try:
    # If the setproctitle module is available, use that.
    from setproctitle import setproctitle  # noqa
except ImportError:
    pass
