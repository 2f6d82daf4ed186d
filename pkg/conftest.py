"""Pytest wiring: configure Django the same way app/manage.py does."""
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "app.settings")
django.setup()
