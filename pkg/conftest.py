import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'dwentropy.settings')
django.setup()
