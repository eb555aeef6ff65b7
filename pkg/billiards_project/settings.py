import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv('SECRET_KEY', 'django-insecure-billiards-local-only')

DEBUG = os.getenv('DEBUG', 'True') == 'True'

ALLOWED_HOSTS = os.getenv('ALLOWED_HOSTS', 'localhost,127.0.0.1').split(',')

INSTALLED_APPS = [
    'billiard_app',
]

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [],
            'autoescape': True,
        },
    },
]

# Results are written to files only
DATABASES = {}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Output Settings
OUTPUT_DIR = Path(os.getenv('BILLIARDS_OUTPUT_DIR', BASE_DIR / 'output'))
FLOAT_SIGNIFICANT_DIGITS = 15

# Numerical Settings
BILLIARDS = {
    'GEOMETRIC_TOL': float(os.getenv('BILLIARDS_GEOMETRIC_TOL', '1e-9')),
    'MATRIX_TOL': float(os.getenv('BILLIARDS_MATRIX_TOL', '1e-10')),
    'SOLVER_TOL': float(os.getenv('BILLIARDS_SOLVER_TOL', '1e-12')),
    'ANGLE_TOL': float(os.getenv('BILLIARDS_ANGLE_TOL', '1e-8')),
    'TRACE_TOL': float(os.getenv('BILLIARDS_TRACE_TOL', '1e-9')),
    'SNAP_TOL': float(os.getenv('BILLIARDS_SNAP_TOL', '1e-9')),
    'NEWTON_MAX_ITER': int(os.getenv('BILLIARDS_NEWTON_MAX_ITER', '100')),
    'NEWTON_FD_STEP': float(os.getenv('BILLIARDS_NEWTON_FD_STEP', '1e-7')),
    'SEGMENT_SAMPLES': int(os.getenv('BILLIARDS_SEGMENT_SAMPLES', '32')),
    'PENALTY': float(os.getenv('BILLIARDS_PENALTY', '1e6')),
    'RANDOM_STARTS': int(os.getenv('BILLIARDS_RANDOM_STARTS', '8')),
    'DEFAULT_SEED': int(os.getenv('BILLIARDS_DEFAULT_SEED', '0')),
}

# Logging Settings
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'billiard_app': {
            'handlers': ['console'],
            'level': os.getenv('BILLIARDS_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}
