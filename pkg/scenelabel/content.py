# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Content - MIME-like output artifacts with deterministic bytes."""

__all__ = [
    'Content',
    'csv_content',
    'json_content',
    'jsonl_content',
    'text_content',
    ]

import codecs
import csv
import io
import json
import os

from scenelabel.content_type import CSV, JSON, JSONL, UTF8_TEXT


def _dumps(value):
    # Fixed separators and key order: equal values give equal bytes.
    return json.dumps(value, sort_keys=True, separators=(',', ': '),
                      ensure_ascii=False, allow_nan=False)


class Content:
    """A MIME-like Content object.

    'Content' objects can be serialised to bytes using the iter_bytes method
    and written to disk with ``write_to``. Every artifact the pipeline
    produces goes through this class, which is what makes two runs with the
    same inputs produce byte-identical files.

    :ivar content_type: The content type of this Content.
    """

    def __init__(self, content_type, get_bytes):
        """Create a Content."""
        if None in (content_type, get_bytes):
            raise ValueError("None not permitted in {!r}, {!r}".format(
                content_type, get_bytes))
        self.content_type = content_type
        self._get_bytes = get_bytes

    def __eq__(self, other):
        return (self.content_type == other.content_type and
            b''.join(self.iter_bytes()) == b''.join(other.iter_bytes()))

    def as_text(self):
        """Return all of the content as text."""
        return ''.join(self.iter_text())

    def iter_bytes(self):
        """Iterate over bytestrings of the serialised content."""
        return self._get_bytes()

    def iter_text(self):
        """Iterate over the text of the serialised content.

        :raises ValueError: If the content type has no charset and is not
            JSON.
        """
        encoding = self.content_type.parameters.get('charset')
        if encoding is None:
            if self.content_type.type != 'application':
                raise ValueError("Not a text type %r" % self.content_type)
            encoding = 'utf8'
        decoder = codecs.getincrementaldecoder(encoding)()
        for chunk in self.iter_bytes():
            yield decoder.decode(chunk)
        final = decoder.decode(b'', True)
        if final:
            yield final

    def write_to(self, path):
        """Write the content to ``path``, replacing any existing file.

        Parent directories are created as needed.

        :return: ``path``.
        """
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'wb') as stream:
            for chunk in self.iter_bytes():
                stream.write(chunk)
        return path

    def __repr__(self):
        return "<Content type={!r}, value={!r}>".format(
            self.content_type, b''.join(self.iter_bytes()))


def json_content(json_data):
    """Create a JSON Content object from JSON-encodeable data."""
    data = (_dumps(json_data) + '\n').encode('utf8')
    return Content(JSON, lambda: [data])


def jsonl_content(records):
    """Create a JSON-lines Content object, one line per record.

    The records are serialised eagerly, so later mutation of ``records``
    does not change the content.
    """
    lines = [(_dumps(record) + '\n').encode('utf8') for record in records]
    return Content(JSONL, lambda: lines)


def csv_content(header, rows):
    """Create a CSV Content object.

    :param header: A sequence of column names.
    :param rows: An iterable of row sequences.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    data = buffer.getvalue().encode('utf8')
    return Content(CSV, lambda: [data])


def text_content(text):
    """Create a Content object from some text.

    This is useful for adding plain-text reports to an output directory.
    """
    if not isinstance(text, str):
        raise TypeError(
            "text_content must be given text, not '%s'." % type(text).__name__
        )
    data = text.encode('utf8')
    return Content(UTF8_TEXT, lambda: [data])
