from django.apps import AppConfig


class StarConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "star"
    verbose_name = "Star products"
