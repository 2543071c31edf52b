"""
Django settings for the tangles project.

Every tunable below is read through python-decouple, so a .env file or the
process environment overrides the defaults without touching this module.
"""

from pathlib import Path
from decouple import config, Choices

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='django-insecure-tangles-desk-scale-only-3f9c1e0a7b')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = ["*"]


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'rest_framework',
    'App_Tangles.apps.AppTanglesConfig',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'App.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'App.wsgi.application'


# Database

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'Africa/Lagos'

USE_I18N = True

USE_TZ = True


STATIC_URL = 'static/'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Logging

LOG_LEVEL = config('LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'App_Tangles': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}


# Size guards and engine choice for the tangle computations

TANGLES_MEMO_LIMIT = config('TANGLES_MEMO_LIMIT', default=24, cast=int)
TANGLES_DENSE_TABLE_LIMIT = config('TANGLES_DENSE_TABLE_LIMIT', default=20, cast=int)
TANGLES_MAX_EXHAUSTIVE = config('TANGLES_MAX_EXHAUSTIVE', default=12, cast=int)
TANGLES_SAMPLE_LIMIT = config('TANGLES_SAMPLE_LIMIT', default=20, cast=int)
TANGLES_AXIOM_SAMPLE_SIZE = config('TANGLES_AXIOM_SAMPLE_SIZE', default=20000, cast=int)
TANGLES_AXIOM_SAMPLE_SEED = config('TANGLES_AXIOM_SAMPLE_SEED', default=0, cast=int)
TANGLES_MAX_FREE_POSITIONS = config('TANGLES_MAX_FREE_POSITIONS', default=22, cast=int)
TANGLES_MAX_BASE_ORDER = config('TANGLES_MAX_BASE_ORDER', default=5, cast=int)
TANGLES_MAX_DS_ORDER = config('TANGLES_MAX_DS_ORDER', default=4, cast=int)
TANGLES_BRUTE_FORCE_LIMIT = config('TANGLES_BRUTE_FORCE_LIMIT', default=10, cast=int)
TANGLES_BRANCH_WIDTH_LIMIT = config('TANGLES_BRANCH_WIDTH_LIMIT', default=7, cast=int)
TANGLES_ENGINE = config('TANGLES_ENGINE', default='closure', cast=Choices(['closure', 'mu']))
