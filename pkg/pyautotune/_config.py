__all__ = [
    'SECTIONS',
    'parse_config',
    'load_config',
]


import os.path

try:
    import tomllib  # type: ignore[import] # tomllib doesn't exist on 3.9-3.10
except ImportError:
    import tomli as tomllib


# section -> {key: expected type}
SECTIONS = {
    'tuning': {
        'optimizer': str,
        'lower': float,
        'upper': float,
        'ignore': int,
        'dim': int,
        'num_opt': int,
        'max_iter': int,
        'nm_error': float,
        'seed': int,
    },
    'bench': {
        'function': str,
    },
    'rbgs': {
        'threads': int,
        'n': int,
        'tol': float,
        'max_sweeps': int,
        'chunks_mode': str,
        'tuned_mode': str,
        'fixed_chunk': int,
    },
    'output': {
        'output': str,
        'output_path': str,
    },
}


def _normalize(section, key, value):
    expected = SECTIONS[section][key]
    if expected is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if isinstance(value, bool) or not isinstance(value, expected):
        raise ValueError(f'[{section}] {key} must be {expected.__name__}, got {value!r}')
    return value


def parse_config(text, filename='<config>'):
    """Return the run defaults found in TOML text, keyed by option name."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ValueError(f'{filename}: {exc}')

    unused = sorted(set(data) - set(SECTIONS))
    if unused:
        raise ValueError(f'{filename}: unsupported sections ({", ".join(unused)})')

    defaults = {}
    for section, secdata in data.items():
        if not isinstance(secdata, dict):
            raise ValueError(f'{filename}: [{section}] must be a table')
        unknown = sorted(set(secdata) - set(SECTIONS[section]))
        if unknown:
            raise ValueError(f'{filename}: unsupported keys in [{section}] ({", ".join(unknown)})')
        for key, value in secdata.items():
            defaults[key] = _normalize(section, key, value)
    if 'output_path' in defaults:
        defaults['output_path'] = os.path.expanduser(defaults['output_path'])
    return defaults


def load_config(filename):
    with open(filename, encoding='utf-8') as infile:
        text = infile.read()
    return parse_config(text, filename)
