from django.apps import AppConfig


class AppTanglesConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'App_Tangles'
    verbose_name = 'Tangles and canonical decompositions'
