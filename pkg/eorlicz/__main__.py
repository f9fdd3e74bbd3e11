# -*- coding: utf-8 -*-
# __main__.py - permite rodar "python -m eorlicz <comando>"

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
