import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'tensorval.settings')
django.setup()
