from rest_framework.response import Response
from rest_framework import viewsets, status
from rest_framework.decorators import action
from functools import wraps
import logging

from . import services
from . exceptions import TanglesError
from . export import decomposition_to_json, directed_to_json
from . models import DecompositionRecord
from . serializers import DecompositionRecordSerializer

logger = logging.getLogger(__name__)


def handle_exceptions(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except TanglesError as e:
            return Response({"status": "failed", "message": str(e)}, status=status.HTTP_400_BAD_REQUEST)
        except Exception as e:
            logger.error(f"Unexpected error in {func.__name__}: {str(e)}")
            return Response({"status": "failed", "message": str(e)}, status=status.HTTP_500_INTERNAL_SERVER_ERROR)

    return wrapper


def missing(request, *fields):
    """Response for the first absent field, or None when all are given."""
    for name in fields:
        if request.data.get(name) in (None, ''):
            return Response({"status": "failed", "message": f"{name} is required"}, status=status.HTTP_400_BAD_REQUEST)
    return None


def as_int(request, name):
    value = request.data.get(name)
    try:
        return int(value)
    except (TypeError, ValueError):
        raise TanglesError(f"{name} must be an integer, got {value!r}")


class TangleViewSet(viewsets.ViewSet):

    @handle_exceptions
    @action(detail=False, methods=['post'])
    def tangles(self, request):
        """
        Census of every tangle up to the requested order.
        """
        error = missing(request, 'instance', 'order')
        if error:
            return error
        loaded = services.load_instance(request.data['instance'], request.data.get('fn'))
        ds = services.structure(loaded, as_int(request, 'order'))
        return Response({"status": "success", "message": f"Tangles of {loaded.function} up to order {ds.k}",
                         "data": services.census(ds)}, status=status.HTTP_200_OK)

    @handle_exceptions
    @action(detail=False, methods=['post'])
    def branch_width(self, request):
        error = missing(request, 'instance')
        if error:
            return error
        loaded = services.load_instance(request.data['instance'], request.data.get('fn'))
        data = services.branch_width(loaded, brute=bool(request.data.get('brute', False)))
        return Response({"status": "success", "message": f"Branch width of {loaded.function}", "data": data},
                        status=status.HTTP_200_OK)

    @handle_exceptions
    @action(detail=False, methods=['post'])
    def decompose(self, request):
        """
        Canonical (or refined) tree decomposition; the document is stored as a record.
        """
        error = missing(request, 'instance', 'order')
        if error:
            return error
        loaded = services.load_instance(request.data['instance'], request.data.get('fn'))
        order = as_int(request, 'order')
        refined = bool(request.data.get('refined', False))
        doc = decomposition_to_json(services.decompose(loaded, order, refined=refined))
        obj = services.record(loaded, DecompositionRecord.REFINED if refined else DecompositionRecord.CANONICAL, order, doc)
        return Response({"status": "success", "message": f"Decomposition {obj.id} of order {order}", "data": doc},
                        status=status.HTTP_201_CREATED)

    @handle_exceptions
    @action(detail=False, methods=['post'])
    def directed(self, request):
        error = missing(request, 'instance', 'order', 'root_index')
        if error:
            return error
        loaded = services.load_instance(request.data['instance'], request.data.get('fn'))
        order = as_int(request, 'order')
        root_index = as_int(request, 'root_index')
        doc = directed_to_json(services.directed(loaded, order, root_index))
        obj = services.record(loaded, DecompositionRecord.DIRECTED, order, doc, root_index=root_index)
        return Response({"status": "success", "message": f"Directed decomposition {obj.id} rooted at tangle {root_index}",
                         "data": doc}, status=status.HTTP_201_CREATED)

    @handle_exceptions
    @action(detail=False, methods=['post'])
    def verify(self, request):
        error = missing(request, 'instance', 'decomposition')
        if error:
            return error
        doc = request.data['decomposition']
        if not isinstance(doc, dict):
            return Response({"status": "failed", "message": "decomposition must be a JSON object"},
                            status=status.HTTP_400_BAD_REQUEST)
        loaded = services.load_instance(request.data['instance'], request.data.get('fn'))
        report = services.verify(loaded, doc)
        message = "Decomposition verified" if report["ok"] else f"{len(report['violations'])} violations found"
        return Response({"status": "success", "message": message, "data": report}, status=status.HTTP_200_OK)

    @handle_exceptions
    @action(detail=False, methods=['get'])
    def fetch_all_decompositions(self, request):

        records = DecompositionRecord.objects.all().order_by('-created_at')
        serializer = DecompositionRecordSerializer(records, many=True)
        return Response({"status": "success", "message": "All saved decompositions", "data": serializer.data},
                        status=status.HTTP_200_OK)

    @handle_exceptions
    @action(detail=True, methods=['get'])
    def get_decomposition(self, request, pk=None):

        obj = DecompositionRecord.objects.filter(id=pk).first()
        if not obj:
            return Response({"status": "failed", "message": "Decomposition not found"}, status=status.HTTP_404_NOT_FOUND)
        serializer = DecompositionRecordSerializer(obj)
        return Response({"status": "success", "message": f"Decomposition {pk}", "data": serializer.data},
                        status=status.HTTP_200_OK)
