#!/usr/bin/env python
"""Django's command-line utility; ``python manage.py run|validate|test`` from a checkout."""
from tensorval.cli import main

if __name__ == '__main__':
    main()
