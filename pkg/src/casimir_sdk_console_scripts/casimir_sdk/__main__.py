import logging
import sys
from typing import Optional, Sequence

import casimir_sdk
from casimir_sdk.exceptions import EXIT_IO, EXIT_USAGE, ConfigError

logger = logging.getLogger('casimir_sdk')


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config = casimir_sdk.parse_config(argv)
    except ConfigError as e:
        if e.exit_code == EXIT_USAGE and not argv:
            print(casimir_sdk.ArgsParser.usage(), file=sys.stderr)
        else:
            print(f'error: {e}', file=sys.stderr)
            if e.remedy:
                print(f'remedy: {e.remedy}', file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_IO
    return casimir_sdk.execute(config)


if __name__ == '__main__':
    sys.exit(main())
