from django.apps import AppConfig


class McIntegrationConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'mc_integration'
