"""Services package"""

from .report_service import report_service
from .table_service import table_service

__all__ = ['report_service', 'table_service']
