from django.apps import AppConfig


class PacBayesConfig(AppConfig):
    """AppConfig subclass for the 'pacbayes' app.

    Args:
        AppConfig: The base class for application configuration.

    Attributes:
        name (str): The name of the app.
        verbose_name (str): Human-readable name shown by management commands.
    """

    name = 'pacbayes'
    verbose_name = 'PAC-Bayes bounds'
