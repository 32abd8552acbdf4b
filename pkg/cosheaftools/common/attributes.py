import logging

from cosheaftools.common.exceptions import DocumentException

log = logging.getLogger(__name__)


def integer_processor(value, field):
    """Accept a JSON integer or a decimal string; booleans are rejected."""
    if isinstance(value, bool):
        raise DocumentException('Expected an integer, got a boolean', field)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        text = value.strip()
        digits = text[1:] if text[:1] in '+-' else text
        if digits.isascii() and digits.isdigit():
            return int(text)
    raise DocumentException(
        'Expected an integer or a decimal string, got {0!r}'.format(value),
        field
    )


def count_processor(value, field):
    value = integer_processor(value, field)
    if value < 0:
        raise DocumentException('Expected a nonnegative count', field)
    return value


def name_processor(value, field):
    if not isinstance(value, str) or not value:
        raise DocumentException(
            'Expected a nonempty identifier, got {0!r}'.format(value), field
        )
    if DocumentAttributes.MAP_SEPARATOR in value:
        raise DocumentException(
            'Identifiers may not contain {0!r}'.format(
                DocumentAttributes.MAP_SEPARATOR
            ),
            field
        )
    return value


def list_processor(value, field):
    if not isinstance(value, list):
        raise DocumentException(
            'Expected a list, got {0}'.format(type(value).__name__), field
        )
    return value


def object_processor(value, field):
    if not isinstance(value, dict):
        raise DocumentException(
            'Expected an object, got {0}'.format(type(value).__name__), field
        )
    return value


class DocumentAttributes:
    # Document kinds
    KIND_COMPLEX = 'simplicial-complex'
    KIND_POSET = 'poset'
    KINDS = (KIND_COMPLEX, KIND_POSET)
    # Top level keys
    KEY_KIND = 'kind'
    KEY_VERTICES = 'vertices'
    KEY_SIMPLICES = 'simplices'
    KEY_ELEMENTS = 'elements'
    KEY_HASSE = 'hasse'
    KEY_GROUPS = 'groups'
    KEY_MAPS = 'maps'
    # Group entry keys
    KEY_GENS = 'gens'
    KEY_RELATIONS = 'relations'
    # Map keys read "upper>lower"
    MAP_SEPARATOR = '>'

    # Keys each document kind must carry besides the cosheaf data.
    REQUIRED_KEYS = {
        KIND_COMPLEX: (KEY_VERTICES, KEY_SIMPLICES),
        KIND_POSET: (KEY_ELEMENTS, KEY_HASSE),
    }

    NODE_PROCESSOR = {
        KEY_VERTICES: list_processor,
        KEY_SIMPLICES: list_processor,
        KEY_ELEMENTS: list_processor,
        KEY_HASSE: list_processor,
        KEY_GROUPS: object_processor,
        KEY_MAPS: object_processor,
        KEY_GENS: count_processor,
        KEY_RELATIONS: list_processor,
    }

    DOCUMENT_DEFAULTS = {
        KEY_MAPS: {},
    }

    GROUP_DEFAULTS = {
        KEY_RELATIONS: [],
    }

    @staticmethod
    def process_attributes(attributes, prefix='', defaults={}):
        """
        Run each known key of *attributes* through its NODE_PROCESSOR entry,
        filling in *defaults* first. *prefix* is prepended to field names in
        error messages.
        """
        attributes = object_processor(attributes, prefix or '<document>')
        result = dict(defaults)
        result.update(attributes)
        for name, value in result.items():
            processor = DocumentAttributes.NODE_PROCESSOR.get(name)
            if processor is not None:
                result[name] = processor(value, prefix + name)
        return result

    @staticmethod
    def split_map_key(key, field):
        parts = key.split(DocumentAttributes.MAP_SEPARATOR)
        if len(parts) != 2 or not all(parts):
            raise DocumentException(
                'Map keys must read "upper{0}lower"'.format(
                    DocumentAttributes.MAP_SEPARATOR
                ),
                field
            )
        return parts[0], parts[1]
