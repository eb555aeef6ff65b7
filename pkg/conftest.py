import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'billiards_project.settings')
django.setup()
