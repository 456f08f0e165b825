from django.apps import AppConfig


class PolytopeConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'polytope'
