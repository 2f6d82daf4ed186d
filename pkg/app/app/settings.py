"""
Django settings for app project.

The project hosts the pacbayes application and is driven through
management commands only: there is no database and no URL routing.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.0/ref/settings/
"""

from os import getenv
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


SECRET_KEY = getenv("SECRET_KEY", "pacbayes-local")

DEBUG = getenv("DEBUG", "False").lower() in {"1", "true", "yes"}

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "pacbayes",

    "rest_framework",
]

REST_FRAMEWORK = {
    "DEFAULT_AUTHENTICATION_CLASSES": [],
    "DEFAULT_PERMISSION_CLASSES": [],
    "UNAUTHENTICATED_USER": None,
}

# Experiments keep no state between runs.
DATABASES = {}


# Experiment defaults; config files and command-line flags override them.

PACBAYES = {
    "THREADS": int(getenv("PACBAYES_THREADS", "0")),
    "DEFAULT_ALPHA": float(getenv("PACBAYES_DEFAULT_ALPHA", "2.0")),
    "FIXPOINT_TOL": float(getenv("PACBAYES_FIXPOINT_TOL", "1e-4")),
}

PACBAYES_LOG_LEVEL = getenv("PACBAYES_LOG_LEVEL", "INFO").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "rich": {
            "format": "%(name)s: %(message)s",
            "datefmt": "[%X]",
        },
    },
    "handlers": {
        "rich": {
            "class": "rich.logging.RichHandler",
            "formatter": "rich",
            "rich_tracebacks": True,
            "show_path": False,
        },
    },
    "loggers": {
        "pacbayes": {
            "handlers": ["rich"],
            "level": PACBAYES_LOG_LEVEL,
            "propagate": False,
        },
    },
}


# Internationalization

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True
