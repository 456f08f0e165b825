from django.apps import AppConfig


class SymtensorConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'symtensor'
