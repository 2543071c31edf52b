from django.urls import path
from . views import TangleViewSet


urlpatterns = [
   path('tangles/', TangleViewSet.as_view({'post': 'tangles'}), name='tangle-census'),
   path('branch-width/', TangleViewSet.as_view({'post': 'branch_width'}), name='branch-width'),
   path('decompose/', TangleViewSet.as_view({'post': 'decompose'}), name='decomposition-create'),
   path('directed/', TangleViewSet.as_view({'post': 'directed'}), name='directed-decomposition-create'),
   path('verify/', TangleViewSet.as_view({'post': 'verify'}), name='decomposition-verify'),
   path('decompositions/', TangleViewSet.as_view({'get': 'fetch_all_decompositions'}), name='all-decompositions'),
   path('decompositions/<uuid:pk>/', TangleViewSet.as_view({'get': 'get_decomposition'}), name='saved-decomposition'),
]
