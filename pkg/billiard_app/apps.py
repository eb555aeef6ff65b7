from django.apps import AppConfig


class BilliardAppConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'billiard_app'
    verbose_name = 'Hyperbolic Billiards'
