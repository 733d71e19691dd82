import os

import django


# Mirror tox's base-reqs environment (manage.py test --settings=conformal.tests.settings_base)
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "conformal.tests.settings_base")
django.setup()
